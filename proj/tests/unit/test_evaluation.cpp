#include <gtest/gtest.h>

#include "hrl/evaluation.hpp"

namespace hrl {
namespace {

const Span A{0, 1}, B{2, 3}, C{4, 5};

Sentence sent(std::vector<Triple> gold) {
  Sentence s;
  s.tokens = {"a", "x", "b", "y", "c", "z"};
  s.gold = std::move(gold);
  return s;
}

TEST(Prf, ZeroConventions) {
  Prf p;
  EXPECT_EQ(p.precision(), 0.0);
  EXPECT_EQ(p.recall(), 0.0);
  EXPECT_EQ(p.f1(), 0.0);
  p = Prf{1, 1, 1};
  EXPECT_DOUBLE_EQ(p.f1(), 0.5);
}

TEST(ScoreTriples, HandEnumeration) {
  const Prf p = score_triples({{{A, 0, B}, {A, 0, C}}}, {{{A, 0, B}, {A, 1, C}}});
  EXPECT_EQ(p, (Prf{1, 1, 1}));
  EXPECT_DOUBLE_EQ(p.precision(), 0.5);
  EXPECT_DOUBLE_EQ(p.recall(), 0.5);
  EXPECT_DOUBLE_EQ(p.f1(), 0.5);
}

TEST(ScoreTriples, OneToOneAndPermutation) {
  EXPECT_EQ(score_triples({{{A, 0, B}, {A, 0, B}}}, {{{A, 0, B}}}), (Prf{1, 1, 0}));
  EXPECT_EQ(score_triples({{{A, 0, B}, {A, 1, C}}}, {{{A, 1, C}, {A, 0, B}}}), (Prf{2, 0, 0}));
  EXPECT_THROW(score_triples({{}}, {}), EvaluationError);
}

TEST(ScoreDetection, MultisetTypes) {
  EXPECT_EQ(score_relation_detection({{{A, 0, B}, {A, 0, C}}}, {{{A, 0, B}, {A, 1, C}}}), (Prf{1, 1, 1}));
  // Wrong entities, right type: counts here, not for triples.
  EXPECT_EQ(score_relation_detection({{{C, 0, B}}}, {{{A, 0, B}}}), (Prf{1, 0, 0}));
  EXPECT_EQ(score_triples({{{C, 0, B}}}, {{{A, 0, B}}}), (Prf{0, 1, 1}));
}

TEST(OverlapSubsets, HandTally) {
  const std::vector<Sentence> gold{
      sent({{A, 0, B}}),                          // None
      sent({{A, 0, B}, {A, 2, C}}),               // TypeI
      sent({{A, 0, B}, {A, 1, B}}),               // TypeII
      sent({{A, 0, B}, {A, 1, B}, {A, 2, C}}),    // Mixed
      sent({{A, 0, B}, {A, 2, C}}),               // TypeI
  };
  const TripleLists pred{
      {{A, 0, B}},
      {{A, 0, B}},
      {{A, 0, B}, {A, 1, B}, {A, 2, B}},
      {{A, 1, B}, {A, 2, C}},
      {},
  };
  std::vector<OverlapClass> classes;
  TripleLists g;
  for (const Sentence& s : gold) {
    classes.push_back(classify_overlap(s));
    g.push_back(s.gold);
  }
  const OverlapReports r = score_overlap_subsets(pred, g, classes);
  ASSERT_TRUE(r.type1 && r.type2);
  // TypeI ∪ Mixed: sentences 1, 3, 4 -> tp 1+2+0, fp 0+0+0, fn 1+1+2
  EXPECT_EQ(*r.type1, (Prf{3, 0, 4}));
  // TypeII ∪ Mixed: sentences 2, 3 -> tp 2+2, fp 1+0, fn 0+1
  EXPECT_EQ(*r.type2, (Prf{4, 1, 1}));
}

TEST(OverlapSubsets, EmptyMarkers) {
  const OverlapReports none = score_overlap_subsets({{}}, {{{A, 0, B}}}, {OverlapClass::None});
  EXPECT_FALSE(none.type1);
  EXPECT_FALSE(none.type2);
  const OverlapReports one = score_overlap_subsets({{{A, 0, B}, {A, 2, C}}}, {{{A, 0, B}, {A, 2, C}}}, {OverlapClass::TypeI});
  ASSERT_TRUE(one.type1);
  EXPECT_DOUBLE_EQ(one.type1->f1(), 1.0);
  EXPECT_FALSE(one.type2);
}

TEST(Evaluate, ReportShapeAndDetectionDominates) {
  const RelationSchema schema({"r0", "r1", "r2"});
  const std::vector<Sentence> gold{sent({{A, 0, B}, {A, 2, C}}), sent({{A, 1, B}})};
  const TripleLists pred{{{A, 0, B}, {C, 2, A}}, {{B, 1, A}}};
  const EvalReport r = evaluate(pred, gold, schema);
  EXPECT_EQ(r.sentences, 2);
  EXPECT_GE(r.detection.f1(), r.triples.f1());
  EXPECT_EQ(r.per_relation.size(), 3u);
  const nlohmann::json j = to_json(r);
  for (const char* key : {"triples", "relation_detection", "overlap", "per_relation", "sentences"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  for (const char* key : {"precision", "recall", "f1", "tp", "fp", "fn"}) EXPECT_TRUE(j["triples"].contains(key));
  EXPECT_NE(format_report(r).find("relation detection"), std::string::npos);
}

}  // namespace
}  // namespace hrl
