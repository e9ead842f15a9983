#include "commands.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "hrl/synthetic.hpp"

namespace hrl::cli {

using nlohmann::json;

namespace {

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

/// Writes to `path` if given, else to standard output.
class Output {
 public:
  explicit Output(const std::optional<std::filesystem::path>& path) {
    if (path) {
      file_.open(*path);
      if (!file_) throw std::runtime_error("cannot write " + path->string());
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

}  // namespace

TrainConfig resolve_train_config(const std::optional<std::filesystem::path>& config_file, const TrainOverrides& f) {
  TrainConfig config;
  if (config_file) read_json(*config_file).get_to(config);
  if (f.learning_rate) config.learning_rate = *f.learning_rate;
  if (f.alpha) config.alpha = *f.alpha;
  if (f.beta) config.beta = *f.beta;
  if (f.gamma) config.gamma = *f.gamma;
  if (f.clip) config.clip_norm = *f.clip;
  if (f.batch) config.batch_size = *f.batch;
  if (f.epochs) config.epochs = *f.epochs;
  if (f.workers) config.workers = *f.workers;
  if (f.seed) config.seed = *f.seed;
  if (f.final_reward) config.final_reward = parse_final_reward_mode(*f.final_reward);
  if (f.optimizer) config.optimizer = parse_optimizer(*f.optimizer);
  if (f.baseline) config.baseline = *f.baseline;
  if (f.dim) config.dims = ModelDims{*f.dim, *f.dim, *f.dim, *f.dim, *f.dim};
  validate(config);
  return config;
}

int run_generate(const GenerateArgs& args) {
  SynthConfig config;
  if (args.config) read_json(*args.config).get_to(config);
  validate(config);
  const RelationSchema schema = synthetic_schema(config);
  std::filesystem::create_directories(args.out);

  struct Split {
    const char* name;
    int count;
  };
  json manifest{{"seed", args.seed}, {"config", config}, {"splits", json::object()}};
  const Split splits[] = {{"train", config.sentences}, {"valid", config.valid_sentences}, {"test", config.test_sentences}};
  for (std::size_t k = 0; k < 3; ++k) {
    const auto sentences = generate_synthetic(config, derive_seed(args.seed, k), splits[k].count);
    save_corpus(args.out / (std::string(splits[k].name) + ".jsonl"), sentences, schema);
    manifest["splits"][splits[k].name] = {{"sentences", sentences.size()}, {"histogram", overlap_histogram(sentences)}};
  }
  save_schema(schema, args.out / "schema.json");
  write_text(args.out / "manifest.json", manifest.dump(2) + "\n");
  return 0;
}

int run_train(const TrainArgs& args) {
  const TrainConfig config = resolve_train_config(args.config, args.overrides);
  const RelationSchema schema = load_schema(args.schema);
  std::vector<Sentence> train_corpus = load_corpus(args.train, schema);
  // Without a test split, types are kept and only gold-empty sentences go.
  std::vector<Sentence> test_corpus = args.test ? load_corpus(*args.test, schema) : train_corpus;
  FilteredCorpus filtered = filter_corpus(std::move(train_corpus), std::move(test_corpus));
  if (filtered.train.empty()) throw std::runtime_error("training corpus is empty after filtering");

  std::optional<std::vector<Sentence>> valid;
  if (args.valid) {
    valid = load_corpus(*args.valid, schema);
    std::erase_if(*valid, [](const Sentence& s) { return s.gold.empty(); });
  }

  std::filesystem::create_directories(args.out);
  write_text(args.out / "config.json", json(config).dump(2) + "\n");
  std::cerr << "training with " << json(config).dump() << '\n';

  std::ofstream metrics(args.out / "metrics.jsonl");
  if (!metrics) throw std::runtime_error("cannot write metrics log");
  TrainOptions options;
  options.validation = valid ? &*valid : nullptr;
  options.metrics_log = &metrics;
  options.embeddings = args.embeddings;
  const TrainResult result = train(filtered.train, schema, config, options);
  save_checkpoint(result.best, args.out / "model.hrlx");
  std::cerr << "best epoch " << result.best_epoch << " of " << config.epochs << "; checkpoint "
            << (args.out / "model.hrlx").string() << '\n';
  return 0;
}

int run_eval(const EvalArgs& args) {
  const RelationSchema schema = load_schema(args.schema);
  const Checkpoint ckpt = load_checkpoint(args.model, schema);
  const std::vector<Sentence> test = load_corpus(args.test, schema);
  const EvalReport report = evaluate(extract_all(test, ckpt.vocab, ckpt.params), test, schema);
  std::cout << format_report(report);
  if (args.out) write_text(*args.out, to_json(report).dump(2) + "\n");
  return 0;
}

int run_extract(const ExtractArgs& args) {
  const Checkpoint ckpt = load_checkpoint(args.model);
  std::ifstream in(args.input);
  if (!in) throw std::runtime_error("cannot open " + args.input.string());
  Output output(args.out);
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    Sentence sentence;
    std::istringstream words(line);
    for (std::string w; words >> w;) sentence.tokens.push_back(w);
    if (sentence.tokens.empty()) {
      std::cerr << "warning: " << args.input.string() << ":" << line_number << ": empty line skipped\n";
      continue;
    }
    json triples = json::array();
    for (const Triple& t : extract(sentence, ckpt.vocab, ckpt.params)) {
      auto words_of = [&](const Span& s) {
        return std::vector<std::string>(sentence.tokens.begin() + s.start, sentence.tokens.begin() + s.end);
      };
      triples.push_back({{"source", words_of(t.source)},
                         {"type", ckpt.schema.name(t.relation)},
                         {"target", words_of(t.target)},
                         {"source_span", {t.source.start, t.source.end}},
                         {"target_span", {t.target.start, t.target.end}}});
    }
    output.stream() << triples.dump() << '\n';
  }
  return 0;
}

int run_grad_check(const GradCheckArgs& args) {
  Output output(args.out);
  Rng rng(args.seed);
  double worst = 0.0;
  bool ok = true;
  for (int k = 0; k < args.instances; ++k) {
    GradCheckSpec spec;
    spec.seed = rng.next();
    spec.length = rng.between(2, 4);
    spec.relation_count = rng.between(1, 3);
    spec.dims.hidden_dim = 2 * rng.between(1, 4);
    spec.dims.state_dim = rng.between(2, 8);
    const GradCheckReport report = grad_check(spec, args.tolerance);
    worst = std::max(worst, report.max_relative_error);
    ok = ok && report.passed;
    json tensors = json::object();
    for (const TensorCheck& t : report.tensors) tensors[t.name] = t.relative_error;
    output.stream() << json{{"instance", k}, {"length", spec.length}, {"max_relative_error", report.max_relative_error},
                            {"passed", report.passed}, {"tensors", tensors}}
                           .dump()
                    << '\n';
  }
  std::cerr << "grad-check: " << args.instances << " instances, max relative error " << worst
            << (ok ? " (pass)" : " (FAIL)") << '\n';
  return ok ? 0 : 2;
}

}  // namespace hrl::cli
