#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "hrl/training.hpp"

namespace hrl::cli {

struct GenerateArgs {
  std::optional<std::filesystem::path> config;
  std::uint64_t seed = 1;
  std::filesystem::path out;
};

/// Flags given on the command line; unset fields fall back to the config file, then defaults.
struct TrainOverrides {
  std::optional<double> learning_rate, alpha, beta, gamma, clip;
  std::optional<int> batch, epochs, workers, dim;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> final_reward, optimizer;
  std::optional<bool> baseline;
};

struct TrainArgs {
  std::filesystem::path train;
  std::filesystem::path schema;
  std::optional<std::filesystem::path> valid;
  std::optional<std::filesystem::path> test;
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> embeddings;
  std::filesystem::path out;
  TrainOverrides overrides;
};

struct EvalArgs {
  std::filesystem::path model;
  std::filesystem::path test;
  std::filesystem::path schema;
  std::optional<std::filesystem::path> out;
};

struct ExtractArgs {
  std::filesystem::path model;
  std::filesystem::path input;
  std::optional<std::filesystem::path> out;
};

struct GradCheckArgs {
  std::uint64_t seed = 1;
  int instances = 20;
  double tolerance = 1e-3;
  std::optional<std::filesystem::path> out;
};

/// Resolves defaults < config file < flags.
TrainConfig resolve_train_config(const std::optional<std::filesystem::path>& config_file, const TrainOverrides& flags);

int run_generate(const GenerateArgs& args);
int run_train(const TrainArgs& args);
int run_eval(const EvalArgs& args);
int run_extract(const ExtractArgs& args);
int run_grad_check(const GradCheckArgs& args);

}  // namespace hrl::cli
