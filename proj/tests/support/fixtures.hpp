#pragma once

#include <vector>

#include "hrl/environment.hpp"
#include "hrl/synthetic.hpp"
#include "hrl/training.hpp"

namespace hrl::testing {

/// Scripted policy reading gold annotations: options are the gold types
/// at their last-argument positions (bumped right when two triples end at
/// the same token), tags are the subtask's gold tags.
Chooser oracle_chooser(const Sentence& sentence);

/// Position at which the oracle launches each gold triple, in gold order.
std::vector<int> oracle_positions(const Sentence& sentence);

/// Structurally valid trace with random options and random rewards; no
/// activations. Suitable for compute_returns only.
EpisodeTrace random_trace(Rng& rng, int max_length = 8, int relation_count = 3);

/// Direct discounted suffix sums, one step at a time.
std::vector<double> brute_force_returns(const EpisodeTrace& trace, double gamma);

/// The small overlap mix used by acceptance-style tests.
SynthConfig small_synth_config(int sentences);

ModelParams random_params(int vocab_size, int relation_count, std::uint64_t seed, int dim = 8, double scale = 0.3);

}  // namespace hrl::testing
