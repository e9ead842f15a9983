#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "hrl/environment.hpp"
#include "hrl/evaluation.hpp"

namespace hrl {

enum class OptimizerKind { Sgd, Adam };

std::string_view to_string(OptimizerKind kind);
OptimizerKind parse_optimizer(std::string_view name);

struct TrainConfig {
  double learning_rate = 4e-5;
  int batch_size = 16;
  double alpha = 0.1;
  double beta = 0.9;
  double gamma = 0.95;
  int epochs = 10;
  std::uint64_t seed = 1;
  double clip_norm = 5.0;
  FinalRewardMode final_reward = FinalRewardMode::Types;
  OptimizerKind optimizer = OptimizerKind::Sgd;
  /// Subtract a moving-average return per level before the policy gradient.
  bool baseline = false;
  double baseline_decay = 0.99;
  int workers = 1;
  double valid_fraction = 0.005;
  double init_scale = 0.08;
  /// Start every bias except the LSTM forget gate at zero.
  bool zero_bias_init = false;
  ModelDims dims;
};

void to_json(nlohmann::json& j, const TrainConfig& config);
/// Missing keys keep the value already in `config`.
void from_json(const nlohmann::json& j, TrainConfig& config);

/// Throws std::invalid_argument on out-of-range settings.
void validate(const TrainConfig& config);

class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Discounted returns aligned with trace.steps. High-level returns skip over
/// subtasks with γ^N; low-level returns stay within their subtask.
std::vector<double> compute_returns(const EpisodeTrace& trace, double gamma);

class NonFiniteGradientError : public std::runtime_error {
 public:
  explicit NonFiniteGradientError(const std::string& tensor)
      : std::runtime_error("non-finite gradient in " + tensor), tensor_(tensor) {}
  const std::string& tensor() const { return tensor_; }

 private:
  std::string tensor_;
};

/// Gradient-ascent optimizer over ModelParams.
class Optimizer {
 public:
  Optimizer(OptimizerKind kind, const ModelParams& like);
  void ascend(ModelParams& params, const ModelParams& grads, double learning_rate);

 private:
  OptimizerKind kind_;
  ModelParams first_moment_;
  ModelParams second_moment_;
  long steps_ = 0;
};

/// Global-norm clipping; returns the pre-clip norm.
double clip_global_norm(ModelParams& grads, double max_norm);

struct TrainState {
  ModelParams params;
  Optimizer optimizer;
  std::uint64_t episodes = 0;
  double high_baseline = 0.0;
  double low_baseline = 0.0;
  bool baseline_initialized = false;

  TrainState(ModelParams initial, OptimizerKind kind)
      : params(std::move(initial)), optimizer(kind, params) {}
};

struct BatchStats {
  double surrogate = 0.0;     // mean Σ R log p
  double mean_reward = 0.0;   // mean undiscounted episode reward (immediate + final)
  double mean_f_beta = 0.0;   // mean episode final reward
  double grad_norm = 0.0;     // before clipping
};

/// One sampled episode per sentence, REINFORCE gradients, one ascent step.
BatchStats train_step(const std::vector<const Sentence*>& batch, const Vocabulary& vocab, TrainState& state,
                      const TrainConfig& config);

/// Every learnable tensor plus what is needed to use them.
struct Checkpoint {
  static constexpr std::uint32_t kVersion = 1;

  TrainConfig config;
  RelationSchema schema;
  Vocabulary vocab;
  ModelParams params;
};

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);
void write_checkpoint(std::ostream& out, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);
Checkpoint read_checkpoint(std::istream& in);
/// Also rejects checkpoints whose relation heads disagree with `schema`.
Checkpoint load_checkpoint(const std::filesystem::path& path, const RelationSchema& schema);

struct EpochMetrics {
  int epoch = 0;
  double mean_reward = 0.0;
  double mean_f_beta = 0.0;
  double surrogate = 0.0;
  Prf validation;
};

void to_json(nlohmann::json& j, const EpochMetrics& metrics);

struct TrainResult {
  Checkpoint best;
  std::vector<EpochMetrics> metrics;
  int best_epoch = 0;  // 0 = initialization
};

/// Greedy extraction over a corpus, one triple list per sentence.
std::vector<std::vector<Triple>> extract_all(const std::vector<Sentence>& sentences, const Vocabulary& vocab,
                                             const ModelParams& params);

struct TrainOptions {
  /// Held-out corpus for best-checkpoint selection; when null a seeded
  /// valid_fraction split (at least one sentence) is taken from the training data.
  const std::vector<Sentence>* validation = nullptr;
  /// Receives one JSON line per epoch.
  std::ostream* metrics_log = nullptr;
  /// Optional `token v1 ... vD` file copied over the initial embedding rows.
  std::optional<std::filesystem::path> embeddings;
};

TrainResult train(const std::vector<Sentence>& corpus, const RelationSchema& schema, const TrainConfig& config,
                  const TrainOptions& options = {});

/// Small random instance for finite-difference gradient verification.
struct GradCheckSpec {
  int length = 3;
  int vocab_size = 6;
  int relation_count = 2;
  ModelDims dims{4, 8, 6, 3, 3};
  double init_scale = 0.5;
  double gamma = 0.95;
  double step = 1e-4;
  std::uint64_t seed = 1;
};

struct TensorCheck {
  std::string name;
  double analytic_norm = 0.0;
  double numeric_norm = 0.0;
  double relative_error = 0.0;
};

struct GradCheckReport {
  std::vector<TensorCheck> tensors;
  double max_relative_error = 0.0;
  bool passed = false;
};

struct GradCheckHooks {
  /// Applied to the analytic gradient before comparison (fault injection).
  std::function<void(ModelParams&)> corrupt_analytic;
  /// Replaces the computed returns (e.g. all zeros).
  std::function<void(std::vector<double>&)> override_returns;
};

/// Freezes one sampled episode and compares the analytic gradient of
/// Σ R_t log p_t with central differences, per tensor.
GradCheckReport grad_check(const GradCheckSpec& spec, double tolerance, const GradCheckHooks& hooks = {});

}  // namespace hrl
