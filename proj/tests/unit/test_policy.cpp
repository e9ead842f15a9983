#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "hrl/policy.hpp"
#include "hrl/trace.hpp"

namespace hrl {
namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

HighPolicyParams scalar_high() {
  HighPolicyParams p;
  p.state_weight = Matrix::Ones(1, 3);
  p.state_bias = Vector::Zero(1);
  p.option_weight = Matrix::Zero(2, 1);
  p.option_bias = Vector::Zero(2);
  p.relation_embedding = Matrix::Zero(2, 1);
  return p;
}

TEST(HighState, ScalarHandValue) {
  AgentState prev{vec({0.1}), Level::High};
  const AgentState s = high_state(vec({0.5}), vec({0.25}), prev, scalar_high());
  EXPECT_NEAR(s.value[0], std::tanh(0.85), 1e-12);
  EXPECT_NEAR(s.value[0], 0.6911, 1e-4);
  EXPECT_EQ(s.level, Level::High);
}

TEST(HighState, ZeroEverythingIsZero) {
  HighPolicyParams p = scalar_high();
  p.state_weight.setZero();
  const AgentState s = high_state(vec({0.0}), vec({0.0}), initial_state(1), p);
  EXPECT_EQ(s.value[0], 0.0);
  EXPECT_EQ(initial_state(4).value.norm(), 0.0);
}

TEST(OptionDistribution, UniformAndHandSoftmax) {
  HighPolicyParams p = scalar_high();
  AgentState s{vec({0.3}), Level::High};
  Vector probs = option_distribution(s, p);
  EXPECT_NEAR(probs[0], 0.5, 1e-12);
  p.option_bias = vec({1.0, 0.0});
  probs = option_distribution(s, p);
  EXPECT_NEAR(probs[0], std::exp(1.0) / (std::exp(1.0) + 1.0), 1e-12);
  EXPECT_NEAR(probs[0], 0.7311, 1e-4);
  EXPECT_NEAR(probs[1], 0.2689, 1e-4);
}

TEST(Softmax, NormalizedAndShiftInvariant) {
  Rng rng(5);
  for (int k = 0; k < 50; ++k) {
    Vector logits(6);
    for (int i = 0; i < 6; ++i) logits[i] = rng.uniform(-30, 30);
    const Vector p = softmax(logits);
    EXPECT_NEAR(p.sum(), 1.0, 1e-6);
    EXPECT_GE(p.minCoeff(), 0.0);
    Eigen::Index a = 0, b = 0;
    p.maxCoeff(&a);
    softmax((logits.array() + 7.5).matrix()).maxCoeff(&b);
    EXPECT_EQ(a, b);
  }
}

TEST(LowState, ScalarHandValueAndContext) {
  LowPolicyParams p;
  p.state_weight = vec({1.0, 0.5, -1.0, 2.0}).transpose();
  p.state_bias = vec({0.1});
  p.context_weight = Matrix::Constant(1, 1, 0.5);
  p.context_bias = Vector::Zero(1);
  AgentState option{vec({0.4}), Level::High};
  const Vector c = option_context(option, p);
  EXPECT_NEAR(c[0], std::tanh(0.2), 1e-12);
  AgentState prev{vec({0.3}), Level::High};
  const AgentState s = low_state(vec({0.2}), vec({0.6}), prev, option, p);
  EXPECT_NEAR(s.value[0], std::tanh(0.2 + 0.3 - 0.3 + 2.0 * std::tanh(0.2) + 0.1), 1e-12);
  EXPECT_EQ(s.level, Level::Low);
}

TEST(ActionDistribution, UniformAndPerRelationHeads) {
  const ModelParams m = testing::random_params(5, 2, 7);
  AgentState s{Vector::Constant(8, 0.3), Level::Low};
  ModelParams zero = zeros_like(m);
  const Vector u = action_distribution(s, 0, zero.low);
  for (int i = 0; i < kTagCount; ++i) EXPECT_NEAR(u[i], 1.0 / 7.0, 1e-12);
  const Vector a = action_distribution(s, 0, m.low);
  const Vector b = action_distribution(s, 1, m.low);
  EXPECT_EQ(a.size(), kTagCount);
  EXPECT_NEAR(a.sum(), 1.0, 1e-6);
  EXPECT_GT((a - b).norm(), 1e-6);
}

TEST(PolicyBackward, PositiveReturnRaisesSampledProbability) {
  const ModelParams m = testing::random_params(6, 2, 11);
  Vocabulary vocab({"a", "b", "c", "d", "e"});
  Sentence s;
  s.tokens = {"a", "b", "c"};
  s.gold = {Triple{{0, 1}, 1, {2, 3}}};
  Rng rng(3);
  const EpisodeTrace trace = run_episode(s, vocab, m, sampling_chooser(rng));
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    std::vector<double> returns(trace.steps.size(), 0.0);
    returns[k] = 1.0;
    ModelParams g = zeros_like(m);
    policy_backward(trace, returns, m, g);
    ModelParams moved = m;
    add_scaled(moved, g, 1e-3);
    const EpisodeTrace again = run_episode(s, vocab, moved, replay_chooser(trace));
    EXPECT_GT(again.steps[k].log_prob, trace.steps[k].log_prob) << "step " << k;
  }
}

TEST(PolicyBackward, ZeroReturnsZeroGradient) {
  const ModelParams m = testing::random_params(6, 2, 11);
  Vocabulary vocab({"a", "b", "c"});
  Sentence s;
  s.tokens = {"a", "b", "c"};
  Rng rng(8);
  const EpisodeTrace trace = run_episode(s, vocab, m, sampling_chooser(rng));
  ModelParams g = zeros_like(m);
  policy_backward(trace, std::vector<double>(trace.steps.size(), 0.0), m, g);
  EXPECT_EQ(squared_norm(g), 0.0);
}

}  // namespace
}  // namespace hrl
