#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "json.hpp"

#include "hrl/corpus.hpp"

namespace hrl {

/// Templated-grammar corpus generator settings.
///
/// Entities are drawn from typed word pools. Every relation type maps a
/// source entity type to a target entity type; relations 2k and 2k+1 share a
/// signature so that two distinct relations can hold between the same pair
/// (type-II overlap). Each relation owns a small set of cue words, emitted at
/// or after the later of its two argument mentions.
struct SynthConfig {
  int vocab_size = 300;
  int relation_types = 3;
  int sentences = 200;
  int valid_sentences = 50;
  int test_sentences = 50;
  double none_fraction = 0.5;
  double type1_fraction = 0.25;
  double type2_fraction = 0.25;
  double mixed_fraction = 0.0;
  int min_length = 8;
  int max_length = 16;
  double multiword_prob = 0.3;
};

void to_json(nlohmann::json& j, const SynthConfig& config);
void from_json(const nlohmann::json& j, SynthConfig& config);

class SynthConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws SynthConfigError if the requested mix cannot be realized.
void validate(const SynthConfig& config);

RelationSchema synthetic_schema(const SynthConfig& config);

/// Per-class sentence counts for n sentences (largest-remainder rounding).
std::vector<int> class_counts(const SynthConfig& config, int n);

/// Deterministic for a fixed (config, seed); `count` overrides config.sentences when ≥ 0.
std::vector<Sentence> generate_synthetic(const SynthConfig& config, std::uint64_t seed, int count = -1);

}  // namespace hrl
