#pragma once

#include <optional>
#include <vector>

#include "hrl/corpus.hpp"
#include "hrl/encoder.hpp"
#include "hrl/policy.hpp"
#include "hrl/tagging.hpp"

namespace hrl {

/// One primitive time step: an option choice (High) or a tag choice (Low).
struct Step {
  Level level = Level::High;
  int time = 0;      // 1-based, strictly increasing across the episode
  int position = 0;  // token index scanned at this step
  int choice = 0;    // OptionId for High, tag index for Low
  double log_prob = 0.0;
  double reward = 0.0;  // immediate reward
  double bonus = 0.0;   // folded-in final reward (0 except at episode/subtask ends)
  int subtask = -1;     // owning subtask for Low; launched subtask for High, -1 if NR

  // Activations kept for the backward pass.
  Vector input;  // concatenated state input
  Vector state;
  Vector probs;
  int embedding_row = 0;  // relation-embedding row (High) or tag-embedding row (Low)

  double total_reward() const { return reward + bonus; }
};

struct Subtask {
  int launch_step = 0;  // index into EpisodeTrace::steps of the launching High step
  int position = 0;
  RelationTypeId relation = 0;
  bool valid = false;  // launched with a gold relation that still had an unmatched triple
  std::optional<std::size_t> matched;
  TagSequence gold;  // empty when gold is unavailable
  TagSequence predicted;
  Vector context;
  double final_reward = 0.0;
  std::optional<Triple> triple;
};

struct EpisodeTrace {
  int length = 0;
  std::vector<int> token_ids;
  EncoderCache encoding;
  Matrix hidden;  // L × H
  std::vector<Step> steps;
  std::vector<Subtask> subtasks;
  std::vector<OptionId> options;  // one per position
  double final_reward = 0.0;
  bool gold_available = false;
  std::vector<Triple> predicted;  // one per subtask that decoded a triple, in subtask order

  int total_steps() const { return static_cast<int>(steps.size()); }
  int non_nr_options() const { return static_cast<int>(subtasks.size()); }
};

}  // namespace hrl
