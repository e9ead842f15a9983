#pragma once

#include "hrl/model.hpp"

namespace hrl {

enum class Level { High, Low };

struct AgentState {
  Vector value;
  Level level = Level::High;
};

/// Zero high-level state that opens every episode.
AgentState initial_state(int state_dim);

Vector softmax(const Vector& logits);

/// tanh(W_s^h [h; v^r; s_prev] + b).
AgentState high_state(const Vector& hidden, const Vector& relation_embedding, const AgentState& prev,
                      const HighPolicyParams& params);

/// softmax over {NR} ∪ R; index 0 is NR.
Vector option_distribution(const AgentState& state, const HighPolicyParams& params);

/// tanh(W_h^l s^h + b) for the high-level state that launched the subtask.
Vector option_context(const AgentState& option_state, const LowPolicyParams& params);

/// tanh(W_s^l [h; v^e; s_prev; context] + b).
AgentState low_state(const Vector& hidden, const Vector& tag_embedding, const AgentState& prev, const Vector& context,
                     const LowPolicyParams& params);
/// Same, computing the context from `option_state`.
AgentState low_state(const Vector& hidden, const Vector& tag_embedding, const AgentState& prev,
                     const AgentState& option_state, const LowPolicyParams& params);

/// softmax over the 7 entity tags using the head of `relation`.
Vector action_distribution(const AgentState& state, RelationTypeId relation, const LowPolicyParams& params);

struct EpisodeTrace;

/// Gradient of Σ_t returns[t] · log p(choice_t) over one recorded episode,
/// accumulated into `grads` for every policy, encoder and embedding tensor.
/// `returns` is aligned with trace.steps.
void policy_backward(const EpisodeTrace& trace, const std::vector<double>& returns, const ModelParams& params,
                     ModelParams& grads);

/// The surrogate Σ_t returns[t] · log p(choice_t) for a recorded episode.
double surrogate_objective(const EpisodeTrace& trace, const std::vector<double>& returns);

}  // namespace hrl
