#include "hrl/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace hrl {

using nlohmann::json;

double Prf::precision() const { return tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp); }
double Prf::recall() const { return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn); }
double Prf::f1() const {
  const double p = precision();
  const double r = recall();
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

Prf& Prf::operator+=(const Prf& other) {
  tp += other.tp;
  fp += other.fp;
  fn += other.fn;
  return *this;
}

namespace {

void check_aligned(const TripleLists& predicted, const TripleLists& gold) {
  if (predicted.size() != gold.size()) {
    throw EvaluationError("prediction list has " + std::to_string(predicted.size()) + " sentences, gold has " +
                          std::to_string(gold.size()));
  }
}

/// One-to-one matching of equal items.
template <class T>
Prf match(std::vector<T> predicted, std::vector<T> gold) {
  std::sort(predicted.begin(), predicted.end());
  std::sort(gold.begin(), gold.end());
  std::vector<T> common;
  std::set_intersection(predicted.begin(), predicted.end(), gold.begin(), gold.end(), std::back_inserter(common));
  const long tp = static_cast<long>(common.size());
  return Prf{tp, static_cast<long>(predicted.size()) - tp, static_cast<long>(gold.size()) - tp};
}

std::vector<RelationTypeId> types_of(const std::vector<Triple>& triples) {
  std::vector<RelationTypeId> out;
  for (const Triple& t : triples) out.push_back(t.relation);
  return out;
}

void accumulate(std::optional<Prf>& slot, const Prf& prf) {
  if (!slot) slot.emplace();
  *slot += prf;
}

}  // namespace

Prf score_triples(const TripleLists& predicted, const TripleLists& gold) {
  check_aligned(predicted, gold);
  Prf total;
  for (std::size_t i = 0; i < gold.size(); ++i) total += match(predicted[i], gold[i]);
  return total;
}

Prf score_relation_detection(const TripleLists& predicted, const TripleLists& gold) {
  check_aligned(predicted, gold);
  Prf total;
  for (std::size_t i = 0; i < gold.size(); ++i) total += match(types_of(predicted[i]), types_of(gold[i]));
  return total;
}

OverlapReports score_overlap_subsets(const TripleLists& predicted, const TripleLists& gold,
                                     const std::vector<OverlapClass>& classes) {
  check_aligned(predicted, gold);
  if (classes.size() != gold.size()) throw EvaluationError("overlap classes not aligned with gold");
  OverlapReports reports;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const OverlapClass c = classes[i];
    const Prf prf = match(predicted[i], gold[i]);
    if (c == OverlapClass::TypeI || c == OverlapClass::Mixed) accumulate(reports.type1, prf);
    if (c == OverlapClass::TypeII || c == OverlapClass::Mixed) accumulate(reports.type2, prf);
  }
  return reports;
}

EvalReport evaluate(const TripleLists& predicted, const std::vector<Sentence>& gold, const RelationSchema& schema) {
  TripleLists gold_lists;
  std::vector<OverlapClass> classes;
  for (const Sentence& s : gold) {
    gold_lists.push_back(s.gold);
    classes.push_back(classify_overlap(s));
  }
  EvalReport report;
  report.sentences = static_cast<int>(gold.size());
  report.triples = score_triples(predicted, gold_lists);
  report.detection = score_relation_detection(predicted, gold_lists);
  report.overlap = score_overlap_subsets(predicted, gold_lists, classes);
  for (RelationTypeId r = 0; r < schema.relation_count(); ++r) {
    TripleLists p, g;
    for (std::size_t i = 0; i < gold_lists.size(); ++i) {
      auto& pi = p.emplace_back();
      auto& gi = g.emplace_back();
      std::copy_if(predicted[i].begin(), predicted[i].end(), std::back_inserter(pi), [r](const Triple& t) { return t.relation == r; });
      std::copy_if(gold_lists[i].begin(), gold_lists[i].end(), std::back_inserter(gi), [r](const Triple& t) { return t.relation == r; });
    }
    report.per_relation[schema.name(r)] = score_triples(p, g);
  }
  return report;
}

json to_json(const Prf& prf) {
  return json{{"precision", prf.precision()}, {"recall", prf.recall()}, {"f1", prf.f1()},
              {"tp", prf.tp},               {"fp", prf.fp},           {"fn", prf.fn}};
}

json to_json(const EvalReport& report) {
  json per_relation = json::object();
  for (const auto& [name, prf] : report.per_relation) per_relation[name] = to_json(prf);
  auto optional_prf = [](const std::optional<Prf>& prf) { return prf ? to_json(*prf) : json(nullptr); };
  return json{{"sentences", report.sentences},
              {"triples", to_json(report.triples)},
              {"relation_detection", to_json(report.detection)},
              {"overlap", {{"type1", optional_prf(report.overlap.type1)}, {"type2", optional_prf(report.overlap.type2)}}},
              {"per_relation", per_relation}};
}

std::string format_report(const EvalReport& report) {
  std::ostringstream out;
  char line[160];
  auto row = [&](const std::string& label, const std::optional<Prf>& prf) {
    if (prf) {
      std::snprintf(line, sizeof line, "%-22s %7.3f %7.3f %7.3f %7ld %7ld %7ld\n", label.c_str(), prf->precision(),
                    prf->recall(), prf->f1(), prf->tp, prf->fp, prf->fn);
    } else {
      std::snprintf(line, sizeof line, "%-22s %7s %7s %7s %7s %7s %7s\n", label.c_str(), "-", "-", "-", "-", "-", "-");
    }
    out << line;
  };
  std::snprintf(line, sizeof line, "%-22s %7s %7s %7s %7s %7s %7s\n", "", "Prec", "Rec", "F1", "TP", "FP", "FN");
  out << line;
  row("triples", report.triples);
  row("relation detection", report.detection);
  row("overlap type I", report.overlap.type1);
  row("overlap type II", report.overlap.type2);
  for (const auto& [name, prf] : report.per_relation) row("  " + name, prf);
  return out.str();
}

}  // namespace hrl
