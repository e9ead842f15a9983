#include "hrl/environment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>

namespace hrl {

std::string_view to_string(FinalRewardMode mode) { return mode == FinalRewardMode::Types ? "types" : "triples"; }

FinalRewardMode parse_final_reward_mode(std::string_view name) {
  if (name == "types") return FinalRewardMode::Types;
  if (name == "triples") return FinalRewardMode::Triples;
  throw std::invalid_argument("final reward mode must be \"types\" or \"triples\", got \"" + std::string(name) + "\"");
}

double high_reward(OptionId option, std::vector<int>& remaining) {
  if (option == kNoRelation) return 0.0;
  const auto r = static_cast<std::size_t>(relation_of(option));
  if (r < remaining.size() && remaining[r] > 0) {
    --remaining[r];
    return 1.0;
  }
  return -1.0;
}

double low_reward(EntityTag action, EntityTag gold, double alpha, bool subtask_valid) {
  if (!subtask_valid) return 0.0;
  const double weight = gold == EntityTag::None ? alpha : 1.0;
  return action == gold ? weight : -weight;
}

double subtask_final_reward(const TagSequence& predicted, const TagSequence& gold, bool subtask_valid) {
  if (predicted.size() != gold.size()) {
    throw std::invalid_argument("subtask_final_reward: predicted length " + std::to_string(predicted.size()) +
                                " != gold length " + std::to_string(gold.size()));
  }
  if (!subtask_valid) return 0.0;
  return predicted == gold ? 1.0 : -1.0;
}

double f_beta(double precision, double recall, double beta) {
  const double b2 = beta * beta;
  const double denom = b2 * precision + recall;
  if (denom <= 0.0) return 0.0;
  return (1.0 + b2) * precision * recall / denom;
}

namespace {

double f_beta_counts(long tp, std::size_t predicted, std::size_t gold, double beta) {
  if (predicted == 0 || gold == 0) return 0.0;
  return f_beta(static_cast<double>(tp) / static_cast<double>(predicted),
                static_cast<double>(tp) / static_cast<double>(gold), beta);
}

template <class T>
long multiset_overlap(const std::vector<T>& a, const std::vector<T>& b) {
  std::map<T, long> counts;
  for (const T& x : b) ++counts[x];
  long tp = 0;
  for (const T& x : a) {
    auto it = counts.find(x);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++tp;
    }
  }
  return tp;
}

}  // namespace

double episode_final_reward(const std::vector<RelationTypeId>& predicted, const std::vector<RelationTypeId>& gold,
                            double beta) {
  return f_beta_counts(multiset_overlap(predicted, gold), predicted.size(), gold.size(), beta);
}

double episode_final_reward(const std::vector<Triple>& predicted, const std::vector<Triple>& gold, double beta) {
  return f_beta_counts(multiset_overlap(predicted, gold), predicted.size(), gold.size(), beta);
}

Chooser greedy_chooser() {
  return [](const Decision& d) {
    Eigen::Index best = 0;
    d.probs.maxCoeff(&best);
    return static_cast<int>(best);
  };
}

Chooser sampling_chooser(Rng& rng) {
  return [&rng](const Decision& d) { return rng.categorical(d.probs); };
}

Chooser replay_chooser(const EpisodeTrace& trace) {
  std::vector<int> choices;
  for (const Step& s : trace.steps) choices.push_back(s.choice);
  return [choices = std::move(choices), next = std::size_t{0}](const Decision&) mutable {
    if (next >= choices.size()) throw std::logic_error("replay_chooser: trace exhausted");
    return choices[next++];
  };
}

EpisodeTrace run_episode(const Sentence& sentence, const Vocabulary& vocab, const ModelParams& params,
                         const Chooser& chooser, const EpisodeOptions& options) {
  if (sentence.tokens.empty()) throw std::invalid_argument("run_episode: empty sentence");
  const int L = sentence.length();
  const int R = params.relation_count();

  EpisodeTrace trace;
  trace.length = L;
  trace.gold_available = options.gold_available;
  trace.token_ids = vocab.ids(sentence.tokens);
  trace.hidden = encode(embed(trace.token_ids, params.encoder.embedding), params.encoder, &trace.encoding);

  std::vector<int> remaining(static_cast<std::size_t>(R), 0);
  if (options.gold_available) {
    for (const Triple& t : sentence.gold) ++remaining.at(static_cast<std::size_t>(t.relation));
  }
  std::set<std::size_t> consumed;

  AgentState prev = initial_state(params.state_dim());
  int relation_row = kInitialRelationRow;
  int time = 0;

  auto log_of = [](double p) { return std::log(std::max(p, std::numeric_limits<double>::min())); };

  for (int i = 0; i < L; ++i) {
    const Vector h_i = trace.hidden.row(i).transpose();
    Step high;
    high.level = Level::High;
    high.time = ++time;
    high.position = i;
    high.embedding_row = relation_row;
    const Vector relation_vec = params.high.relation_embedding.row(relation_row).transpose();
    high.input.resize(h_i.size() + relation_vec.size() + prev.value.size());
    high.input << h_i, relation_vec, prev.value;
    const AgentState high_s = high_state(h_i, relation_vec, prev, params.high);
    high.state = high_s.value;
    high.probs = option_distribution(high_s, params.high);
    high.choice = chooser(Decision{Level::High, i, high.time, high.probs, -1, nullptr, sentence});
    if (high.choice < 0 || high.choice > R) throw std::out_of_range("chooser returned an invalid option");
    high.log_prob = log_of(high.probs[high.choice]);
    if (options.gold_available) high.reward = high_reward(high.choice, remaining);
    trace.options.push_back(high.choice);
    prev = high_s;

    if (high.choice == kNoRelation) {
      trace.steps.push_back(std::move(high));
      continue;
    }

    Subtask sub;
    sub.launch_step = static_cast<int>(trace.steps.size());
    sub.position = i;
    sub.relation = relation_of(high.choice);
    if (options.gold_available) {
      GoldTagging g = gold_tags(sentence, sub.relation, consumed);
      sub.gold = std::move(g.tags);
      sub.matched = g.matched;
      sub.valid = g.matched.has_value();
      if (g.matched) consumed.insert(*g.matched);
    }
    sub.context = option_context(high_s, params.low);
    high.subtask = static_cast<int>(trace.subtasks.size());
    trace.steps.push_back(std::move(high));
    relation_row = option_of(sub.relation);

    int tag_row = kInitialTagRow;
    for (int j = 0; j < L; ++j) {
      const Vector h_j = trace.hidden.row(j).transpose();
      Step low;
      low.level = Level::Low;
      low.time = ++time;
      low.position = j;
      low.subtask = static_cast<int>(trace.subtasks.size());
      low.embedding_row = tag_row;
      const Vector tag_vec = params.low.tag_embedding.row(tag_row).transpose();
      low.input.resize(h_j.size() + tag_vec.size() + prev.value.size() + sub.context.size());
      low.input << h_j, tag_vec, prev.value, sub.context;
      const AgentState low_s = low_state(h_j, tag_vec, prev, sub.context, params.low);
      low.state = low_s.value;
      low.probs = action_distribution(low_s, sub.relation, params.low);
      low.choice = chooser(Decision{Level::Low, j, low.time, low.probs, sub.relation,
                                    options.gold_available ? &sub.gold : nullptr, sentence});
      if (low.choice < 0 || low.choice >= kTagCount) throw std::out_of_range("chooser returned an invalid tag");
      low.log_prob = log_of(low.probs[low.choice]);
      const EntityTag action = tag_at(low.choice);
      if (options.gold_available) {
        low.reward = low_reward(action, sub.gold[static_cast<std::size_t>(j)], options.alpha, sub.valid);
      }
      sub.predicted.push_back(action);
      tag_row = low.choice;
      prev = low_s;
      trace.steps.push_back(std::move(low));
    }
    if (options.gold_available) {
      sub.final_reward = subtask_final_reward(sub.predicted, sub.gold, sub.valid);
      trace.steps.back().bonus += sub.final_reward;
    }
    const DecodedSpans spans = decode_spans(sub.predicted, DecodeMode::Lenient);
    sub.triple = assemble_triple(sub.relation, spans.sources, spans.targets);
    if (sub.triple) trace.predicted.push_back(*sub.triple);
    trace.subtasks.push_back(std::move(sub));
  }

  if (options.gold_available) {
    if (options.final_reward == FinalRewardMode::Types) {
      std::vector<RelationTypeId> predicted_types, gold_types;
      for (const Subtask& s : trace.subtasks) predicted_types.push_back(s.relation);
      for (const Triple& t : sentence.gold) gold_types.push_back(t.relation);
      trace.final_reward = episode_final_reward(predicted_types, gold_types, options.beta);
    } else {
      trace.final_reward = episode_final_reward(trace.predicted, sentence.gold, options.beta);
    }
    // Folded into the last high-level step.
    for (auto it = trace.steps.rbegin(); it != trace.steps.rend(); ++it) {
      if (it->level == Level::High) {
        it->bonus += trace.final_reward;
        break;
      }
    }
  }
  return trace;
}

std::vector<Triple> extract(const Sentence& sentence, const Vocabulary& vocab, const ModelParams& params,
                            const Chooser& chooser) {
  EpisodeOptions options;
  options.gold_available = false;
  const EpisodeTrace trace = run_episode(sentence, vocab, params, chooser, options);
  std::vector<Triple> out;
  for (const Triple& t : trace.predicted) {
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  }
  return out;
}

std::vector<Triple> extract(const Sentence& sentence, const Vocabulary& vocab, const ModelParams& params) {
  return extract(sentence, vocab, params, greedy_chooser());
}

void write_trace(std::ostream& out, const EpisodeTrace& trace, const RelationSchema& schema) {
  char buffer[256];
  for (const Step& s : trace.steps) {
    const std::string choice =
        s.level == Level::High ? schema.option_name(s.choice) : std::string(to_string(tag_at(s.choice)));
    std::snprintf(buffer, sizeof buffer, "%d\t%s\t%d\t%s\t%.6f\t%.6f\t%.6f\n", s.time,
                  s.level == Level::High ? "high" : "low", s.position, choice.c_str(), s.log_prob, s.reward, s.bonus);
    out << buffer;
  }
}

}  // namespace hrl
