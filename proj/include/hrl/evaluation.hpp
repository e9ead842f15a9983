#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "hrl/corpus.hpp"

namespace hrl {

/// Micro-aggregated counts.
struct Prf {
  long tp = 0;
  long fp = 0;
  long fn = 0;

  double precision() const;
  double recall() const;
  double f1() const;

  Prf& operator+=(const Prf& other);
  bool operator==(const Prf&) const = default;
};

class EvaluationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using TripleLists = std::vector<std::vector<Triple>>;

/// One-to-one exact (source, type, target) matching per sentence.
Prf score_triples(const TripleLists& predicted, const TripleLists& gold);

/// Multiset intersection of relation types per sentence.
Prf score_relation_detection(const TripleLists& predicted, const TripleLists& gold);

struct OverlapReports {
  std::optional<Prf> type1;  // empty when no TypeI/Mixed sentence exists
  std::optional<Prf> type2;  // empty when no TypeII/Mixed sentence exists
};

/// Triple scores restricted to {TypeI, Mixed} and {TypeII, Mixed} sentences.
OverlapReports score_overlap_subsets(const TripleLists& predicted, const TripleLists& gold,
                                     const std::vector<OverlapClass>& classes);

struct EvalReport {
  Prf triples;
  Prf detection;
  OverlapReports overlap;
  std::map<std::string, Prf> per_relation;
  int sentences = 0;
};

EvalReport evaluate(const TripleLists& predicted, const std::vector<Sentence>& gold, const RelationSchema& schema);

nlohmann::json to_json(const Prf& prf);
nlohmann::json to_json(const EvalReport& report);
/// Aligned P / R / F1 table.
std::string format_report(const EvalReport& report);

}  // namespace hrl
