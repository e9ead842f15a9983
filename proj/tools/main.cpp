#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

using namespace hrl::cli;

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical RL joint entity and relation extraction"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a synthetic corpus (train/valid/test, schema, manifest)");
  generate->add_option("--config", gen.config, "Synthetic corpus config (JSON)")->check(CLI::ExistingFile);
  generate->add_option("--seed", gen.seed, "Random seed");
  generate->add_option("--out", gen.out, "Output directory")->required();

  TrainArgs tr;
  auto* train = app.add_subcommand("train", "Train both policies with REINFORCE");
  train->add_option("--train", tr.train, "Training corpus (JSON lines)")->required();
  train->add_option("--schema", tr.schema, "Relation schema (JSON)")->required();
  train->add_option("--valid", tr.valid, "Validation corpus; default is a split of the training data");
  train->add_option("--test", tr.test, "Test corpus, used only to filter training relation types");
  train->add_option("--config", tr.config, "Training config (JSON); flags override it");
  train->add_option("--embeddings", tr.embeddings, "Pre-trained vectors: `token v1 ... vD` per line");
  train->add_option("--out", tr.out, "Output directory for model.hrlx and metrics.jsonl")->required();
  train->add_option("--seed", tr.overrides.seed, "Random seed");
  train->add_option("--lr", tr.overrides.learning_rate, "Learning rate (default 4e-5)");
  train->add_option("--batch", tr.overrides.batch, "Minibatch size (default 16)");
  train->add_option("--alpha", tr.overrides.alpha, "Non-entity reward weight (default 0.1)");
  train->add_option("--beta", tr.overrides.beta, "F-beta weight of the final reward (default 0.9)");
  train->add_option("--gamma", tr.overrides.gamma, "Discount factor (default 0.95)");
  train->add_option("--epochs", tr.overrides.epochs, "Training epochs");
  train->add_option("--clip", tr.overrides.clip, "Global gradient-norm clip (default 5)");
  train->add_option("--workers", tr.overrides.workers, "Rollout threads per batch");
  train->add_option("--final-reward", tr.overrides.final_reward, "Episode final reward over types|triples")
      ->check(CLI::IsMember({"types", "triples"}));
  train->add_option("--optimizer", tr.overrides.optimizer, "sgd|adam")->check(CLI::IsMember({"sgd", "adam"}));
  train->add_option("--baseline", tr.overrides.baseline, "Moving-average return baseline (true|false)");
  train->add_option("--dim", tr.overrides.dim, "Set every vector dimension at once");

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Score a checkpoint on a labelled corpus");
  eval->add_option("--model", ev.model, "Checkpoint")->required();
  eval->add_option("--test", ev.test, "Test corpus")->required();
  eval->add_option("--schema", ev.schema, "Relation schema")->required();
  eval->add_option("--out", ev.out, "Report JSON path");

  ExtractArgs ex;
  auto* extract = app.add_subcommand("extract", "Extract triples from whitespace-tokenized lines");
  extract->add_option("--model", ex.model, "Checkpoint")->required();
  extract->add_option("--input", ex.input, "One sentence per line")->required();
  extract->add_option("--out", ex.out, "Output path (default stdout)");

  GradCheckArgs gc;
  auto* grad = app.add_subcommand("grad-check", "Finite-difference check of the policy gradient");
  grad->add_option("--seed", gc.seed, "Random seed");
  grad->add_option("--instances", gc.instances, "Random small instances");
  grad->add_option("--tolerance", gc.tolerance, "Max relative error");
  grad->add_option("--out", gc.out, "Per-instance JSON lines (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*generate) return run_generate(gen);
    if (*train) return run_train(tr);
    if (*eval) return run_eval(ev);
    if (*extract) return run_extract(ex);
    if (*grad) return run_grad_check(gc);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
