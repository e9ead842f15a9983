#include "hrl/policy.hpp"

#include "hrl/trace.hpp"

namespace hrl {

AgentState initial_state(int state_dim) { return AgentState{Vector::Zero(state_dim), Level::High}; }

Vector softmax(const Vector& logits) {
  const Vector shifted = (logits.array() - logits.maxCoeff()).exp();
  return shifted / shifted.sum();
}

namespace {

Vector concat(std::initializer_list<const Vector*> parts) {
  Eigen::Index n = 0;
  for (const Vector* p : parts) n += p->size();
  Vector out(n);
  Eigen::Index offset = 0;
  for (const Vector* p : parts) {
    out.segment(offset, p->size()) = *p;
    offset += p->size();
  }
  return out;
}

Vector tanh_layer(const Matrix& weight, const Vector& bias, const Vector& input) {
  return (weight * input + bias).array().tanh();
}

Vector tanh_derivative(const Vector& activation) { return (1.0 - activation.array().square()).matrix(); }

}  // namespace

AgentState high_state(const Vector& hidden, const Vector& relation_embedding, const AgentState& prev,
                      const HighPolicyParams& params) {
  const Vector input = concat({&hidden, &relation_embedding, &prev.value});
  return AgentState{tanh_layer(params.state_weight, params.state_bias, input), Level::High};
}

Vector option_distribution(const AgentState& state, const HighPolicyParams& params) {
  return softmax(params.option_weight * state.value + params.option_bias);
}

Vector option_context(const AgentState& option_state, const LowPolicyParams& params) {
  return tanh_layer(params.context_weight, params.context_bias, option_state.value);
}

AgentState low_state(const Vector& hidden, const Vector& tag_embedding, const AgentState& prev, const Vector& context,
                     const LowPolicyParams& params) {
  const Vector input = concat({&hidden, &tag_embedding, &prev.value, &context});
  return AgentState{tanh_layer(params.state_weight, params.state_bias, input), Level::Low};
}

AgentState low_state(const Vector& hidden, const Vector& tag_embedding, const AgentState& prev,
                     const AgentState& option_state, const LowPolicyParams& params) {
  return low_state(hidden, tag_embedding, prev, option_context(option_state, params), params);
}

Vector action_distribution(const AgentState& state, RelationTypeId relation, const LowPolicyParams& params) {
  const auto r = static_cast<std::size_t>(relation);
  return softmax(params.action_weight.at(r) * state.value + params.action_bias.at(r));
}

double surrogate_objective(const EpisodeTrace& trace, const std::vector<double>& returns) {
  double total = 0.0;
  for (std::size_t k = 0; k < trace.steps.size(); ++k) total += returns[k] * trace.steps[k].log_prob;
  return total;
}

void policy_backward(const EpisodeTrace& trace, const std::vector<double>& returns, const ModelParams& params,
                     ModelParams& grads) {
  const Eigen::Index H = params.encoder.hidden_dim();
  const Eigen::Index S = params.state_dim();
  const Eigen::Index Dr = params.high.relation_embedding.cols();
  const Eigen::Index De = params.low.tag_embedding.cols();

  Matrix grad_hidden = Matrix::Zero(trace.length, H);
  std::vector<Vector> grad_context(trace.subtasks.size(), Vector::Zero(S));
  Vector grad_prev = Vector::Zero(S);

  for (std::size_t k = trace.steps.size(); k-- > 0;) {
    const Step& step = trace.steps[k];
    const double ret = returns[k];
    Vector grad_logits = -ret * step.probs;
    grad_logits[step.choice] += ret;
    Vector grad_state = grad_prev;

    if (step.level == Level::High) {
      grads.high.option_weight.noalias() += grad_logits * step.state.transpose();
      grads.high.option_bias += grad_logits;
      grad_state.noalias() += params.high.option_weight.transpose() * grad_logits;
      if (step.subtask >= 0) {
        const Subtask& sub = trace.subtasks[static_cast<std::size_t>(step.subtask)];
        const Vector grad_ctx_pre =
            grad_context[static_cast<std::size_t>(step.subtask)].cwiseProduct(tanh_derivative(sub.context));
        grads.low.context_weight.noalias() += grad_ctx_pre * step.state.transpose();
        grads.low.context_bias += grad_ctx_pre;
        grad_state.noalias() += params.low.context_weight.transpose() * grad_ctx_pre;
      }
      const Vector grad_pre = grad_state.cwiseProduct(tanh_derivative(step.state));
      grads.high.state_weight.noalias() += grad_pre * step.input.transpose();
      grads.high.state_bias += grad_pre;
      const Vector grad_input = params.high.state_weight.transpose() * grad_pre;
      grad_hidden.row(step.position) += grad_input.segment(0, H).transpose();
      grads.high.relation_embedding.row(step.embedding_row) += grad_input.segment(H, Dr).transpose();
      grad_prev = grad_input.segment(H + Dr, S);
    } else {
      const auto sub = static_cast<std::size_t>(step.subtask);
      const auto relation = static_cast<std::size_t>(trace.subtasks[sub].relation);
      grads.low.action_weight[relation].noalias() += grad_logits * step.state.transpose();
      grads.low.action_bias[relation] += grad_logits;
      grad_state.noalias() += params.low.action_weight[relation].transpose() * grad_logits;
      const Vector grad_pre = grad_state.cwiseProduct(tanh_derivative(step.state));
      grads.low.state_weight.noalias() += grad_pre * step.input.transpose();
      grads.low.state_bias += grad_pre;
      const Vector grad_input = params.low.state_weight.transpose() * grad_pre;
      grad_hidden.row(step.position) += grad_input.segment(0, H).transpose();
      grads.low.tag_embedding.row(step.embedding_row) += grad_input.segment(H, De).transpose();
      grad_prev = grad_input.segment(H + De, S);
      grad_context[sub] += grad_input.segment(H + De + S, S);
    }
  }

  const Matrix grad_inputs = encode_backward(grad_hidden, trace.encoding, params.encoder, grads.encoder);
  accumulate_embedding_grad(trace.token_ids, grad_inputs, grads.encoder.embedding);
}

}  // namespace hrl
