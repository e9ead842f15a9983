#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <set>
#include <stdexcept>

namespace hrl::testing {

std::vector<int> oracle_positions(const Sentence& sentence) {
  std::vector<int> positions;
  int next_free = 0;
  for (const Triple& t : sentence.gold) {
    const int last = std::max(t.source.end, t.target.end) - 1;
    const int p = std::max(last, next_free);
    if (p >= sentence.length()) throw std::logic_error("oracle: no free position left for a gold triple");
    positions.push_back(p);
    next_free = p + 1;
  }
  return positions;
}

Chooser oracle_chooser(const Sentence& sentence) {
  // Keeps its own consumed set so it also works when the episode runs without gold.
  struct Script {
    std::vector<OptionId> plan;
    std::set<std::size_t> consumed;
    TagSequence tags;
  };
  auto script = std::make_shared<Script>();
  script->plan.assign(static_cast<std::size_t>(sentence.length()), kNoRelation);
  const std::vector<int> positions = oracle_positions(sentence);
  for (std::size_t k = 0; k < positions.size(); ++k) {
    script->plan[static_cast<std::size_t>(positions[k])] = option_of(sentence.gold[k].relation);
  }
  return [script, &sentence](const Decision& d) {
    if (d.level == Level::Low) return tag_index(script->tags[static_cast<std::size_t>(d.position)]);
    const OptionId option = script->plan[static_cast<std::size_t>(d.position)];
    if (option != kNoRelation) {
      GoldTagging g = gold_tags(sentence, relation_of(option), script->consumed);
      if (g.matched) script->consumed.insert(*g.matched);
      script->tags = std::move(g.tags);
    }
    return option;
  };
}

EpisodeTrace random_trace(Rng& rng, int max_length, int relation_count) {
  EpisodeTrace trace;
  trace.length = rng.between(1, max_length);
  trace.gold_available = true;
  int time = 0;
  auto reward = [&] { return rng.uniform(-1.0, 1.0); };
  for (int i = 0; i < trace.length; ++i) {
    Step high;
    high.level = Level::High;
    high.time = ++time;
    high.position = i;
    high.choice = rng.bernoulli(0.3) ? rng.between(1, relation_count) : kNoRelation;
    high.reward = high.choice == kNoRelation ? 0.0 : (rng.bernoulli(0.5) ? 1.0 : -1.0);
    trace.options.push_back(high.choice);
    if (high.choice == kNoRelation) {
      trace.steps.push_back(high);
      continue;
    }
    const int id = static_cast<int>(trace.subtasks.size());
    high.subtask = id;
    Subtask sub;
    sub.launch_step = static_cast<int>(trace.steps.size());
    sub.position = i;
    sub.relation = relation_of(high.choice);
    trace.steps.push_back(high);
    for (int j = 0; j < trace.length; ++j) {
      Step low;
      low.level = Level::Low;
      low.time = ++time;
      low.position = j;
      low.subtask = id;
      low.choice = rng.between(0, kTagCount - 1);
      low.reward = reward();
      trace.steps.push_back(low);
    }
    trace.steps.back().bonus = rng.bernoulli(0.5) ? 1.0 : -1.0;
    trace.subtasks.push_back(sub);
  }
  for (auto it = trace.steps.rbegin(); it != trace.steps.rend(); ++it) {
    if (it->level == Level::High) {
      it->bonus += rng.uniform();
      break;
    }
  }
  return trace;
}

std::vector<double> brute_force_returns(const EpisodeTrace& trace, double gamma) {
  const std::size_t n = trace.steps.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const Step& s = trace.steps[k];
    double sum = 0.0;
    for (std::size_t j = k; j < n; ++j) {
      const Step& o = trace.steps[j];
      if (s.level == Level::High) {
        // High-level rewards only arrive at high steps; time skips over subtasks.
        if (o.level == Level::High) sum += std::pow(gamma, o.time - s.time) * o.total_reward();
      } else {
        if (o.level != Level::Low || o.subtask != s.subtask) break;
        sum += std::pow(gamma, o.time - s.time) * o.total_reward();
      }
    }
    out[k] = sum;
  }
  return out;
}

SynthConfig small_synth_config(int sentences) {
  SynthConfig c;
  c.sentences = sentences;
  c.valid_sentences = 0;
  c.test_sentences = 0;
  return c;
}

ModelParams random_params(int vocab_size, int relation_count, std::uint64_t seed, int dim, double scale) {
  Rng rng(seed);
  return init_params(ModelDims{dim, dim, dim, dim, dim}, vocab_size, relation_count, rng, scale);
}

}  // namespace hrl::testing
