#include <cmath>

#include "hrl/training.hpp"

namespace hrl {

namespace {

double replay_objective(const Sentence& sentence, const Vocabulary& vocab, const ModelParams& params,
                        const EpisodeTrace& frozen, const std::vector<double>& returns) {
  EpisodeOptions options;
  options.gold_available = false;
  const EpisodeTrace replay = run_episode(sentence, vocab, params, replay_chooser(frozen), options);
  return surrogate_objective(replay, returns);
}

}  // namespace

GradCheckReport grad_check(const GradCheckSpec& spec, double tolerance, const GradCheckHooks& hooks) {
  Rng rng(spec.seed);

  std::vector<std::string> words;
  for (int i = 0; i < spec.vocab_size; ++i) words.push_back("t" + std::to_string(i));
  const Vocabulary vocab(words);

  Sentence sentence;
  for (int i = 0; i < spec.length; ++i) sentence.tokens.push_back(words[rng.below(words.size())]);
  if (spec.length >= 2) {
    const int split = rng.between(1, spec.length - 1);
    sentence.gold.push_back(Triple{Span{0, split}, static_cast<RelationTypeId>(rng.below(static_cast<std::size_t>(spec.relation_count))),
                                   Span{split, spec.length}});
  }

  const ModelParams params = init_params(spec.dims, vocab.size(), spec.relation_count, rng, spec.init_scale);

  // Resample until the trace contains a subtask so the low-level tensors are exercised.
  EpisodeTrace trace;
  for (int attempt = 0; attempt < 64; ++attempt) {
    trace = run_episode(sentence, vocab, params, sampling_chooser(rng), EpisodeOptions{});
    if (!trace.subtasks.empty()) break;
  }
  std::vector<double> returns = compute_returns(trace, spec.gamma);
  if (hooks.override_returns) hooks.override_returns(returns);

  ModelParams analytic = zeros_like(params);
  policy_backward(trace, returns, params, analytic);
  if (hooks.corrupt_analytic) hooks.corrupt_analytic(analytic);

  std::vector<Eigen::VectorXd> analytic_flat;
  analytic.visit([&](const std::string&, const auto& t) {
    analytic_flat.emplace_back(Eigen::Map<const Eigen::VectorXd>(t.data(), t.size()));
  });

  GradCheckReport report;
  ModelParams probe = params;
  std::size_t index = 0;
  probe.visit([&](const std::string& name, auto& tensor) {
    Eigen::VectorXd numeric(tensor.size());
    for (Eigen::Index i = 0; i < tensor.size(); ++i) {
      const double saved = tensor.data()[i];
      tensor.data()[i] = saved + spec.step;
      const double plus = replay_objective(sentence, vocab, probe, trace, returns);
      tensor.data()[i] = saved - spec.step;
      const double minus = replay_objective(sentence, vocab, probe, trace, returns);
      tensor.data()[i] = saved;
      numeric[i] = (plus - minus) / (2.0 * spec.step);
    }
    const Eigen::VectorXd& a = analytic_flat[index++];
    TensorCheck check;
    check.name = name;
    check.analytic_norm = a.norm();
    check.numeric_norm = numeric.norm();
    const double denom = check.analytic_norm + check.numeric_norm;
    check.relative_error = denom > 1e-10 ? (a - numeric).norm() / denom : 0.0;
    report.max_relative_error = std::max(report.max_relative_error, check.relative_error);
    report.tensors.push_back(check);
  });
  report.passed = report.max_relative_error <= tolerance;
  return report;
}

}  // namespace hrl
