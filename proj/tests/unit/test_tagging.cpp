#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "hrl/tagging.hpp"

namespace hrl {
namespace {

using enum EntityTag;

TagSequence tags(std::initializer_list<const char*> names) {
  TagSequence out;
  for (const char* n : names) out.push_back(*parse_tag(n));
  return out;
}

// "Steve Belichick father of Bill Belichick , coach of Patriots in Annapolis"
Sentence figure_sentence() {
  Sentence s;
  s.tokens = {"Steve", "Belichick", "father", "of", "Bill", "Belichick", ",", "coach", "of", "Patriots", "in", "Annapolis"};
  s.gold = {Triple{{4, 6}, 1, {9, 10}},   // Bill - coach - Patriots
            Triple{{0, 2}, 0, {4, 6}},    // Steve - parent - Bill
            Triple{{0, 2}, 2, {11, 12}}};  // Steve - born - Annapolis
  return s;
}

TEST(Tags, NamesRoundTrip) {
  for (EntityTag t : kAllTags) EXPECT_EQ(parse_tag(to_string(t)), t);
  EXPECT_FALSE(parse_tag("B-X"));
  EXPECT_EQ(kTagCount, 7);
}

TEST(GoldTags, FigureSentenceParentChildren) {
  const GoldTagging g = gold_tags(figure_sentence(), 0, {});
  EXPECT_EQ(g.matched, 1u);
  EXPECT_EQ(g.tags, tags({"B-S", "I-S", "N", "N", "B-T", "I-T", "N", "N", "N", "B-O", "N", "B-O"}));
}

TEST(GoldTags, SingleTripleThenConsumed) {
  Sentence s;
  s.tokens = {"a", "b", "c", "d", "e"};
  s.gold = {Triple{{0, 1}, 0, {3, 5}}};
  const GoldTagging first = gold_tags(s, 0, {});
  EXPECT_EQ(first.tags, tags({"B-S", "N", "N", "B-T", "I-T"}));
  EXPECT_EQ(first.matched, 0u);
  const GoldTagging again = gold_tags(s, 0, {0});
  EXPECT_EQ(again.tags, tags({"B-O", "N", "N", "B-O", "I-O"}));
  EXPECT_FALSE(again.matched);
}

TEST(GoldTags, DuplicateTypesInDocumentOrder) {
  Sentence s;
  s.tokens = {"a", "b", "c", "d"};
  s.gold = {Triple{{0, 1}, 0, {1, 2}}, Triple{{2, 3}, 0, {3, 4}}};
  EXPECT_EQ(gold_tags(s, 0, {}).matched, 0u);
  EXPECT_EQ(gold_tags(s, 0, {0}).matched, 1u);
  EXPECT_EQ(gold_tags(s, 0, {0}).tags, tags({"B-O", "B-O", "B-S", "B-T"}));
}

TEST(DecodeSpans, SchemeExamples) {
  DecodedSpans d = decode_spans(tags({"B-S", "I-S", "N", "B-T"}));
  EXPECT_EQ(d.sources, (std::vector<Span>{Span{0, 2}}));
  EXPECT_EQ(d.targets, (std::vector<Span>{Span{3, 4}}));
  d = decode_spans(tags({"N", "N", "N"}));
  EXPECT_TRUE(d.sources.empty() && d.targets.empty());
  d = decode_spans(tags({"B-O", "I-O", "B-S", "B-S"}));
  EXPECT_EQ(d.sources, (std::vector<Span>{Span{2, 3}, Span{3, 4}}));
}

TEST(DecodeSpans, OrphanInside) {
  EXPECT_THROW(decode_spans(tags({"I-S", "N"})), MalformedTagsError);
  try {
    decode_spans(tags({"B-S", "I-T"}));
  } catch (const MalformedTagsError& e) {
    EXPECT_EQ(e.position(), 1u);
  }
  const DecodedSpans d = decode_spans(tags({"I-S", "N"}), DecodeMode::Lenient);
  EXPECT_EQ(d.sources, (std::vector<Span>{Span{0, 1}}));
  const DecodedSpans e = decode_spans(tags({"B-S", "I-T", "I-T"}), DecodeMode::Lenient);
  EXPECT_EQ(e.targets, (std::vector<Span>{Span{1, 3}}));
}

TEST(AssembleTriple, FirstSpanRule) {
  EXPECT_EQ(assemble_triple(2, {Span{0, 2}}, {Span{3, 4}}), (Triple{{0, 2}, 2, {3, 4}}));
  EXPECT_FALSE(assemble_triple(2, {}, {Span{3, 4}}));
  EXPECT_FALSE(assemble_triple(2, {Span{0, 1}}, {}));
  EXPECT_EQ(assemble_triple(1, {Span{0, 1}, Span{5, 6}}, {Span{3, 4}}), (Triple{{0, 1}, 1, {3, 4}}));
}

TEST(GoldTags, RoundTripOverSyntheticCorpus) {
  SynthConfig c = testing::small_synth_config(120);
  c.none_fraction = 0.4;
  c.mixed_fraction = 0.1;
  c.multiword_prob = 0.6;
  c.max_length = 18;
  for (const Sentence& s : generate_synthetic(c, 5)) {
    std::set<std::size_t> consumed;
    for (std::size_t k = 0; k < s.gold.size(); ++k) {
      const GoldTagging g = gold_tags(s, s.gold[k].relation, consumed);
      ASSERT_TRUE(g.matched);
      consumed.insert(*g.matched);
      const DecodedSpans d = decode_spans(g.tags);
      const Triple& want = s.gold[*g.matched];
      ASSERT_EQ(d.sources, (std::vector<Span>{want.source}));
      ASSERT_EQ(d.targets, (std::vector<Span>{want.target}));
      EXPECT_EQ(assemble_triple(want.relation, d.sources, d.targets), want);
    }
  }
}

}  // namespace
}  // namespace hrl
