#include "hrl/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>
#include <thread>

namespace hrl {

using nlohmann::json;

std::string_view to_string(OptimizerKind kind) { return kind == OptimizerKind::Sgd ? "sgd" : "adam"; }

OptimizerKind parse_optimizer(std::string_view name) {
  if (name == "sgd") return OptimizerKind::Sgd;
  if (name == "adam") return OptimizerKind::Adam;
  throw std::invalid_argument("optimizer must be \"sgd\" or \"adam\", got \"" + std::string(name) + "\"");
}

void to_json(json& j, const TrainConfig& c) {
  j = json{{"lr", c.learning_rate},
           {"batch", c.batch_size},
           {"alpha", c.alpha},
           {"beta", c.beta},
           {"gamma", c.gamma},
           {"epochs", c.epochs},
           {"seed", c.seed},
           {"clip", c.clip_norm},
           {"final_reward", to_string(c.final_reward)},
           {"optimizer", to_string(c.optimizer)},
           {"baseline", c.baseline},
           {"baseline_decay", c.baseline_decay},
           {"workers", c.workers},
           {"valid_fraction", c.valid_fraction},
           {"init_scale", c.init_scale},
           {"zero_bias_init", c.zero_bias_init},
           {"dims", c.dims}};
}

void from_json(const json& j, TrainConfig& c) {
  static const std::set<std::string> known{"lr",       "batch",          "alpha",   "beta",           "gamma",
                                           "epochs",   "seed",           "clip",    "final_reward",   "optimizer",
                                           "baseline", "baseline_decay", "workers", "valid_fraction", "init_scale",
                                           "zero_bias_init", "dims"};
  for (const auto& item : j.items()) {
    if (!known.contains(item.key())) throw std::invalid_argument("unknown training config key \"" + item.key() + "\"");
  }
  c.learning_rate = j.value("lr", c.learning_rate);
  c.batch_size = j.value("batch", c.batch_size);
  c.alpha = j.value("alpha", c.alpha);
  c.beta = j.value("beta", c.beta);
  c.gamma = j.value("gamma", c.gamma);
  c.epochs = j.value("epochs", c.epochs);
  c.seed = j.value("seed", c.seed);
  c.clip_norm = j.value("clip", c.clip_norm);
  if (j.contains("final_reward")) c.final_reward = parse_final_reward_mode(j.at("final_reward").get<std::string>());
  if (j.contains("optimizer")) c.optimizer = parse_optimizer(j.at("optimizer").get<std::string>());
  c.baseline = j.value("baseline", c.baseline);
  c.baseline_decay = j.value("baseline_decay", c.baseline_decay);
  c.workers = j.value("workers", c.workers);
  c.valid_fraction = j.value("valid_fraction", c.valid_fraction);
  c.init_scale = j.value("init_scale", c.init_scale);
  c.zero_bias_init = j.value("zero_bias_init", c.zero_bias_init);
  if (j.contains("dims")) j.at("dims").get_to(c.dims);
}

void validate(const TrainConfig& c) {
  auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  if (!(c.gamma > 0.0 && c.gamma <= 1.0)) fail("gamma must lie in (0, 1]");
  if (!(c.alpha > 0.0 && c.alpha <= 1.0)) fail("alpha must lie in (0, 1]");
  if (!(c.beta > 0.0)) fail("beta must be positive");
  if (c.batch_size < 1) fail("batch size must be at least 1");
  if (!(c.learning_rate > 0.0)) fail("learning rate must be positive");
  if (c.epochs < 0) fail("epochs must be non-negative");
  if (!(c.clip_norm > 0.0)) fail("clip norm must be positive");
  if (c.workers < 1) fail("workers must be at least 1");
  if (!(c.valid_fraction >= 0.0 && c.valid_fraction < 1.0)) fail("valid_fraction must lie in [0, 1)");
  if (!(c.baseline_decay >= 0.0 && c.baseline_decay < 1.0)) fail("baseline_decay must lie in [0, 1)");
}

Optimizer::Optimizer(OptimizerKind kind, const ModelParams& like) : kind_(kind) {
  if (kind_ == OptimizerKind::Adam) {
    first_moment_ = zeros_like(like);
    second_moment_ = zeros_like(like);
  }
}

void Optimizer::ascend(ModelParams& params, const ModelParams& grads, double learning_rate) {
  if (kind_ == OptimizerKind::Sgd) {
    add_scaled(params, grads, learning_rate);
    return;
  }
  constexpr double b1 = 0.9, b2 = 0.999;
  constexpr double eps = 1e-8;
  ++steps_;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(steps_));
  std::vector<double*> m, v;
  std::vector<const double*> g;
  first_moment_.visit([&](const std::string&, auto& t) { m.push_back(t.data()); });
  second_moment_.visit([&](const std::string&, auto& t) { v.push_back(t.data()); });
  grads.visit([&](const std::string&, const auto& t) { g.push_back(t.data()); });
  std::size_t k = 0;
  params.visit([&](const std::string&, auto& t) {
    double* mk = m[k];
    double* vk = v[k];
    const double* gk = g[k];
    ++k;
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      mk[i] = b1 * mk[i] + (1.0 - b1) * gk[i];
      vk[i] = b2 * vk[i] + (1.0 - b2) * gk[i] * gk[i];
      t.data()[i] += learning_rate * (mk[i] / c1) / (std::sqrt(vk[i] / c2) + eps);
    }
  });
}

double clip_global_norm(ModelParams& grads, double max_norm) {
  const double norm = std::sqrt(squared_norm(grads));
  if (norm > max_norm) scale(grads, max_norm / norm);
  return norm;
}

namespace {

struct EpisodeResult {
  double surrogate = 0.0;
  double reward = 0.0;
  double f_beta = 0.0;
  double high_return_sum = 0.0;
  double low_return_sum = 0.0;
  int high_steps = 0;
  int low_steps = 0;
};

EpisodeResult rollout_and_backprop(const Sentence& sentence, const Vocabulary& vocab, const ModelParams& params,
                                   const TrainConfig& config, std::uint64_t seed, double high_baseline,
                                   double low_baseline, ModelParams& grads) {
  Rng rng(seed);
  EpisodeOptions options{true, config.alpha, config.beta, config.final_reward};
  const EpisodeTrace trace = run_episode(sentence, vocab, params, sampling_chooser(rng), options);
  std::vector<double> returns = compute_returns(trace, config.gamma);

  EpisodeResult result;
  result.f_beta = trace.final_reward;
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    const Step& s = trace.steps[k];
    result.reward += s.total_reward();
    if (s.level == Level::High) {
      result.high_return_sum += returns[k];
      ++result.high_steps;
    } else {
      result.low_return_sum += returns[k];
      ++result.low_steps;
    }
  }
  result.surrogate = surrogate_objective(trace, returns);
  if (config.baseline) {
    for (std::size_t k = 0; k < trace.steps.size(); ++k) {
      returns[k] -= trace.steps[k].level == Level::High ? high_baseline : low_baseline;
    }
  }
  policy_backward(trace, returns, params, grads);
  return result;
}

}  // namespace

BatchStats train_step(const std::vector<const Sentence*>& batch, const Vocabulary& vocab, TrainState& state,
                      const TrainConfig& config) {
  if (batch.empty()) throw std::invalid_argument("train_step: empty batch");
  const std::size_t n = batch.size();
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(config.workers), n);

  std::vector<ModelParams> worker_grads(workers, zeros_like(state.params));
  std::vector<EpisodeResult> results(n);
  auto work = [&](std::size_t w) {
    for (std::size_t i = w; i < n; i += workers) {
      results[i] = rollout_and_backprop(*batch[i], vocab, state.params, config,
                                        derive_seed(config.seed, state.episodes + i), state.high_baseline,
                                        state.low_baseline, worker_grads[w]);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }
  state.episodes += n;

  ModelParams& grads = worker_grads[0];
  for (std::size_t w = 1; w < workers; ++w) add_scaled(grads, worker_grads[w], 1.0);
  scale(grads, 1.0 / static_cast<double>(n));
  grads.visit([](const std::string& name, const auto& t) {
    if (!t.allFinite()) throw NonFiniteGradientError(name);
  });

  BatchStats stats;
  stats.grad_norm = clip_global_norm(grads, config.clip_norm);
  state.optimizer.ascend(state.params, grads, config.learning_rate);
  round_to_float(state.params);

  double high_sum = 0.0, low_sum = 0.0;
  int high_count = 0, low_count = 0;
  for (const EpisodeResult& r : results) {
    stats.surrogate += r.surrogate;
    stats.mean_reward += r.reward;
    stats.mean_f_beta += r.f_beta;
    high_sum += r.high_return_sum;
    low_sum += r.low_return_sum;
    high_count += r.high_steps;
    low_count += r.low_steps;
  }
  stats.surrogate /= static_cast<double>(n);
  stats.mean_reward /= static_cast<double>(n);
  stats.mean_f_beta /= static_cast<double>(n);

  if (config.baseline) {
    const double high_mean = high_count > 0 ? high_sum / high_count : 0.0;
    const double low_mean = low_count > 0 ? low_sum / low_count : 0.0;
    if (!state.baseline_initialized) {
      state.high_baseline = high_mean;
      state.low_baseline = low_mean;
      state.baseline_initialized = true;
    } else {
      const double d = config.baseline_decay;
      state.high_baseline = d * state.high_baseline + (1.0 - d) * high_mean;
      if (low_count > 0) state.low_baseline = d * state.low_baseline + (1.0 - d) * low_mean;
    }
  }
  return stats;
}

std::vector<std::vector<Triple>> extract_all(const std::vector<Sentence>& sentences, const Vocabulary& vocab,
                                             const ModelParams& params) {
  std::vector<std::vector<Triple>> out;
  out.reserve(sentences.size());
  for (const Sentence& s : sentences) out.push_back(extract(s, vocab, params));
  return out;
}

void to_json(json& j, const EpochMetrics& m) {
  j = json{{"epoch", m.epoch},
           {"mean_reward", m.mean_reward},
           {"mean_f_beta", m.mean_f_beta},
           {"surrogate", m.surrogate},
           {"valid", to_json(m.validation)}};
}

TrainResult train(const std::vector<Sentence>& corpus, const RelationSchema& schema, const TrainConfig& config,
                  const TrainOptions& options) {
  validate(config);
  if (corpus.empty()) throw std::invalid_argument("train: empty training corpus");

  std::vector<Sentence> training;
  std::vector<Sentence> held_out;
  if (options.validation) {
    training = corpus;
    held_out = *options.validation;
  } else {
    std::vector<std::size_t> order(corpus.size());
    std::iota(order.begin(), order.end(), 0);
    Rng split_rng(derive_seed(config.seed, 0x56414C4944ULL));
    split_rng.shuffle(order);
    const auto n_valid = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(config.valid_fraction * static_cast<double>(corpus.size()))));
    for (std::size_t k = 0; k < order.size(); ++k) {
      (k < n_valid ? held_out : training).push_back(corpus[order[k]]);
    }
    if (training.empty()) training = held_out;
  }

  Vocabulary vocab = build_vocabulary(training);
  Rng init_rng(derive_seed(config.seed, 1));
  ModelParams params = init_params(config.dims, vocab.size(), schema.relation_count(), init_rng,
                                     config.init_scale, config.zero_bias_init);
  if (options.embeddings) {
    load_embeddings(*options.embeddings, vocab, params.encoder.embedding);
    round_to_float(params);
  }

  TrainResult result;
  result.best = Checkpoint{config, schema, vocab, params};
  double best_f1 = -1.0;

  TrainState state(std::move(params), config.optimizer);
  std::vector<std::size_t> order(training.size());
  std::iota(order.begin(), order.end(), 0);
  Rng shuffle_rng(derive_seed(config.seed, 2));
  const auto batch_size = static_cast<std::size_t>(config.batch_size);

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    EpochMetrics m;
    m.epoch = epoch;
    for (std::size_t start = 0; start < order.size(); start += batch_size) {
      std::vector<const Sentence*> batch;
      for (std::size_t k = start; k < std::min(order.size(), start + batch_size); ++k) {
        batch.push_back(&training[order[k]]);
      }
      const BatchStats stats = train_step(batch, vocab, state, config);
      const double weight = static_cast<double>(batch.size());
      m.mean_reward += stats.mean_reward * weight;
      m.mean_f_beta += stats.mean_f_beta * weight;
      m.surrogate += stats.surrogate * weight;
    }
    const double total = static_cast<double>(training.size());
    m.mean_reward /= total;
    m.mean_f_beta /= total;
    m.surrogate /= total;

    TripleLists gold;
    for (const Sentence& s : held_out) gold.push_back(s.gold);
    m.validation = score_triples(extract_all(held_out, vocab, state.params), gold);
    if (options.metrics_log) *options.metrics_log << json(m).dump() << '\n' << std::flush;

    // Later epochs win ties.
    if (m.validation.f1() >= best_f1) {
      best_f1 = m.validation.f1();
      result.best.params = state.params;
      result.best_epoch = epoch;
    }
    result.metrics.push_back(m);
  }
  return result;
}

}  // namespace hrl
