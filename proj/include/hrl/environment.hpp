#pragma once

#include <functional>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "hrl/trace.hpp"

namespace hrl {

enum class FinalRewardMode { Types, Triples };

std::string_view to_string(FinalRewardMode mode);
FinalRewardMode parse_final_reward_mode(std::string_view name);

/// Relation-detection reward: 0 for NR, +1 if the option's type still has an
/// unmatched gold instance (which is then consumed), −1 otherwise.
/// `remaining` holds per-relation unmatched gold counts.
double high_reward(OptionId option, std::vector<int>& remaining);

/// Per-tag reward λ(gold)·(±1): λ = 1 for entity tags, `alpha` for N.
/// Zero when the subtask's relation was not in gold.
double low_reward(EntityTag action, EntityTag gold, double alpha, bool subtask_valid);

/// +1 if every tag matches, −1 otherwise, 0 for an invalid subtask.
double subtask_final_reward(const TagSequence& predicted, const TagSequence& gold, bool subtask_valid);

/// F_β of predicted vs gold relation types (multisets, given as type lists).
double episode_final_reward(const std::vector<RelationTypeId>& predicted, const std::vector<RelationTypeId>& gold,
                            double beta);
/// F_β over exact-match triples.
double episode_final_reward(const std::vector<Triple>& predicted, const std::vector<Triple>& gold, double beta);

double f_beta(double precision, double recall, double beta);

/// What a chooser sees at one decision point.
struct Decision {
  Level level;
  int position;
  int time;
  const Vector& probs;
  RelationTypeId relation;   // subtask relation (Low only)
  const TagSequence* gold;   // subtask gold tags when available (Low only)
  const Sentence& sentence;
};

/// Picks an option (High) or tag index (Low).
using Chooser = std::function<int(const Decision&)>;

Chooser greedy_chooser();
Chooser sampling_chooser(Rng& rng);
/// Replays the choices recorded in `trace`, in step order.
Chooser replay_chooser(const EpisodeTrace& trace);

struct EpisodeOptions {
  bool gold_available = true;
  double alpha = 0.1;
  double beta = 0.9;
  FinalRewardMode final_reward = FinalRewardMode::Types;
};

/// Runs one full semi-Markov episode: a high-level scan over every position
/// and, for each non-NR option, a low-level tagging pass over the sentence.
EpisodeTrace run_episode(const Sentence& sentence, const Vocabulary& vocab, const ModelParams& params,
                         const Chooser& chooser, const EpisodeOptions& options = {});

/// Greedy episode without gold; deduplicated predicted triples.
std::vector<Triple> extract(const Sentence& sentence, const Vocabulary& vocab, const ModelParams& params);
/// Same, with an explicit chooser.
std::vector<Triple> extract(const Sentence& sentence, const Vocabulary& vocab, const ModelParams& params,
                            const Chooser& chooser);

/// One line per step: time, level, position, choice, log-prob, reward.
void write_trace(std::ostream& out, const EpisodeTrace& trace, const RelationSchema& schema);

}  // namespace hrl
