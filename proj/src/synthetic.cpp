#include "hrl/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "hrl/rng.hpp"

namespace hrl {

using nlohmann::json;

void to_json(json& j, const SynthConfig& c) {
  j = json{{"vocab_size", c.vocab_size},
           {"relation_types", c.relation_types},
           {"sentences", c.sentences},
           {"valid_sentences", c.valid_sentences},
           {"test_sentences", c.test_sentences},
           {"proportions", {{"None", c.none_fraction}, {"TypeI", c.type1_fraction}, {"TypeII", c.type2_fraction},
                            {"Mixed", c.mixed_fraction}}},
           {"min_length", c.min_length},
           {"max_length", c.max_length},
           {"multiword_prob", c.multiword_prob}};
}

void from_json(const json& j, SynthConfig& c) {
  static const std::set<std::string> known{"vocab_size", "relation_types", "sentences",  "valid_sentences",
                                           "test_sentences", "proportions", "min_length", "max_length",
                                           "multiword_prob"};
  for (const auto& item : j.items()) {
    if (!known.contains(item.key())) throw SynthConfigError("unknown synthetic config key \"" + item.key() + "\"");
  }
  c.vocab_size = j.value("vocab_size", c.vocab_size);
  c.relation_types = j.value("relation_types", c.relation_types);
  c.sentences = j.value("sentences", c.sentences);
  c.valid_sentences = j.value("valid_sentences", c.valid_sentences);
  c.test_sentences = j.value("test_sentences", c.test_sentences);
  c.min_length = j.value("min_length", c.min_length);
  c.max_length = j.value("max_length", c.max_length);
  c.multiword_prob = j.value("multiword_prob", c.multiword_prob);
  if (j.contains("proportions")) {
    const json& p = j.at("proportions");
    // Classes left out of an explicit proportion map get zero weight.
    c.none_fraction = p.value("None", 0.0);
    c.type1_fraction = p.value("TypeI", 0.0);
    c.type2_fraction = p.value("TypeII", 0.0);
    c.mixed_fraction = p.value("Mixed", 0.0);
  }
}

namespace {

constexpr int kCuesPerRelation = 2;
constexpr int kMaxEntityWords = 3;
constexpr int kMinPool = 4;

int entity_type_count(int relations) { return 1 + (relations + 1) / 2; }
int target_type(RelationTypeId relation) { return 1 + relation / 2; }

struct Lexicon {
  std::vector<std::string> fillers;
  std::vector<std::vector<std::string>> entities;  // per entity type
  std::vector<std::vector<std::string>> cues;      // per relation
};

struct Budget {
  int fillers = 0;
  int pool = 0;
};

Budget budget(const SynthConfig& config) {
  const int remaining = config.vocab_size - kCuesPerRelation * config.relation_types;
  Budget b;
  b.fillers = remaining / 3;
  b.pool = (remaining - b.fillers) / entity_type_count(config.relation_types);
  return b;
}

Lexicon make_lexicon(const SynthConfig& config) {
  const Budget b = budget(config);
  Lexicon lex;
  for (int i = 0; i < b.fillers; ++i) lex.fillers.push_back("w" + std::to_string(i));
  lex.entities.resize(static_cast<std::size_t>(entity_type_count(config.relation_types)));
  for (std::size_t type = 0; type < lex.entities.size(); ++type) {
    for (int i = 0; i < b.pool; ++i) lex.entities[type].push_back("e" + std::to_string(type) + "_" + std::to_string(i));
  }
  for (int r = 0; r < config.relation_types; ++r) {
    auto& cues = lex.cues.emplace_back();
    for (int i = 0; i < kCuesPerRelation; ++i) cues.push_back("c" + std::to_string(r) + "_" + std::to_string(i));
  }
  return lex;
}

int worst_case_core(const SynthConfig& config, OverlapClass overlap) {
  const int entity_len = config.multiword_prob > 0.0 ? kMaxEntityWords : 1;
  switch (overlap) {
    case OverlapClass::None: return 2 * entity_len + 1;
    case OverlapClass::TypeI: return 3 * entity_len + 2;
    case OverlapClass::TypeII: return 2 * entity_len + 2;
    case OverlapClass::Mixed: return 3 * entity_len + 3;
  }
  return 0;
}

constexpr OverlapClass kClasses[] = {OverlapClass::None, OverlapClass::TypeI, OverlapClass::TypeII,
                                     OverlapClass::Mixed};

std::vector<double> fractions(const SynthConfig& c) {
  return {c.none_fraction, c.type1_fraction, c.type2_fraction, c.mixed_fraction};
}

// One element of the sentence skeleton before fillers are added.
struct Piece {
  enum class Kind { Entity, Cue } kind;
  int index;  // entity id or triple id
};

}  // namespace

void validate(const SynthConfig& config) {
  if (config.relation_types < 1) throw SynthConfigError("relation_types must be at least 1");
  if (config.sentences < 0 || config.valid_sentences < 0 || config.test_sentences < 0) {
    throw SynthConfigError("sentence counts must be non-negative");
  }
  if (config.min_length < 1 || config.max_length < config.min_length) {
    throw SynthConfigError("length range must satisfy 1 <= min_length <= max_length");
  }
  if (config.multiword_prob < 0.0 || config.multiword_prob > 1.0) {
    throw SynthConfigError("multiword_prob must lie in [0, 1]");
  }
  const auto f = fractions(config);
  if (std::any_of(f.begin(), f.end(), [](double x) { return x < 0.0 || !std::isfinite(x); })) {
    throw SynthConfigError("overlap proportions must be non-negative");
  }
  if (std::abs(std::accumulate(f.begin(), f.end(), 0.0) - 1.0) > 1e-6) {
    throw SynthConfigError("overlap proportions must sum to 1");
  }
  if (config.type2_fraction > 0.0 && config.relation_types < 2) {
    throw SynthConfigError("TypeII overlap needs two relation types with a shared signature (relation_types >= 2)");
  }
  if ((config.type1_fraction > 0.0 || config.mixed_fraction > 0.0) && config.relation_types < 3) {
    throw SynthConfigError("TypeI/Mixed overlap needs relations with distinct signatures (relation_types >= 3)");
  }
  const Budget b = budget(config);
  if (b.fillers < kMinPool || b.pool < kMinPool) {
    throw SynthConfigError("vocab_size " + std::to_string(config.vocab_size) + " too small for " +
                           std::to_string(config.relation_types) + " relation types");
  }
  for (std::size_t i = 0; i < 4; ++i) {
    if (f[i] > 0.0 && worst_case_core(config, kClasses[i]) > config.max_length) {
      throw SynthConfigError("max_length too small for requested " + std::string(to_string(kClasses[i])) +
                             " sentences");
    }
  }
}

RelationSchema synthetic_schema(const SynthConfig& config) {
  std::vector<std::string> names;
  for (int r = 0; r < config.relation_types; ++r) names.push_back("rel" + std::to_string(r));
  return RelationSchema(std::move(names));
}

std::vector<int> class_counts(const SynthConfig& config, int n) {
  const auto f = fractions(config);
  std::vector<int> counts(4);
  std::vector<std::pair<double, std::size_t>> remainders;
  int assigned = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    const double exact = f[i] * n;
    counts[i] = static_cast<int>(std::floor(exact + 1e-9));
    assigned += counts[i];
    remainders.emplace_back(exact - counts[i], i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++counts[remainders[k % 4].second];
  return counts;
}

namespace {

class SentenceBuilder {
 public:
  SentenceBuilder(const SynthConfig& config, const Lexicon& lexicon, Rng& rng)
      : config_(config), lex_(lexicon), rng_(rng) {}

  Sentence build(OverlapClass overlap) {
    // Entity 0 is always the shared source.
    struct Spec {
      RelationTypeId relation;
      int source;
      int target;
    };
    std::vector<int> entity_types{0};
    std::vector<Spec> triples;
    const int R = config_.relation_types;
    const int pairs = R / 2;  // signature groups holding two relations
    auto add_entity = [&](int type) {
      entity_types.push_back(type);
      return static_cast<int>(entity_types.size()) - 1;
    };
    auto other_group_relation = [&](int group) {
      std::vector<RelationTypeId> candidates;
      for (RelationTypeId r = 0; r < R; ++r) {
        if (target_type(r) != 1 + group) candidates.push_back(r);
      }
      return candidates[rng_.below(candidates.size())];
    };
    switch (overlap) {
      case OverlapClass::None: {
        const RelationTypeId r = static_cast<RelationTypeId>(rng_.below(static_cast<std::size_t>(R)));
        triples.push_back({r, 0, add_entity(target_type(r))});
        break;
      }
      case OverlapClass::TypeI: {
        const RelationTypeId r1 = static_cast<RelationTypeId>(rng_.below(static_cast<std::size_t>(R)));
        const RelationTypeId r2 = other_group_relation(target_type(r1) - 1);
        triples.push_back({r1, 0, add_entity(target_type(r1))});
        triples.push_back({r2, 0, add_entity(target_type(r2))});
        break;
      }
      case OverlapClass::TypeII:
      case OverlapClass::Mixed: {
        const int group = static_cast<int>(rng_.below(static_cast<std::size_t>(pairs)));
        const int target = add_entity(1 + group);
        triples.push_back({2 * group, 0, target});
        triples.push_back({2 * group + 1, 0, target});
        if (overlap == OverlapClass::Mixed) {
          const RelationTypeId r3 = other_group_relation(group);
          triples.push_back({r3, 0, add_entity(target_type(r3))});
        }
        break;
      }
    }

    // Entities in random order; each cue lands somewhere after both of its arguments.
    std::vector<int> entity_order(entity_types.size());
    std::iota(entity_order.begin(), entity_order.end(), 0);
    rng_.shuffle(entity_order);
    std::vector<int> rank(entity_types.size());
    for (std::size_t k = 0; k < entity_order.size(); ++k) rank[static_cast<std::size_t>(entity_order[k])] = static_cast<int>(k);

    // slot k = after the k-th entity (k = 0 .. E-1); cues can only go in slots >= last argument rank.
    std::vector<std::vector<int>> cues_after(entity_types.size());
    for (std::size_t t = 0; t < triples.size(); ++t) {
      const int last = std::max(rank[static_cast<std::size_t>(triples[t].source)], rank[static_cast<std::size_t>(triples[t].target)]);
      const int slot = rng_.between(last, static_cast<int>(entity_types.size()) - 1);
      cues_after[static_cast<std::size_t>(slot)].push_back(static_cast<int>(t));
    }
    std::vector<Piece> pieces;
    for (std::size_t k = 0; k < entity_order.size(); ++k) {
      pieces.push_back({Piece::Kind::Entity, entity_order[k]});
      rng_.shuffle(cues_after[k]);
      for (int t : cues_after[k]) pieces.push_back({Piece::Kind::Cue, t});
    }

    std::vector<int> entity_lengths(entity_types.size());
    int core = 0;
    for (auto& len : entity_lengths) {
      len = rng_.bernoulli(config_.multiword_prob) ? rng_.between(2, kMaxEntityWords) : 1;
      core += len;
    }
    core += static_cast<int>(triples.size());
    const int target_length = std::max(core, rng_.between(config_.min_length, config_.max_length));

    // Fillers go into the gaps before, between, and after the pieces.
    std::vector<int> gap_fill(pieces.size() + 1, 0);
    for (int k = core; k < target_length; ++k) ++gap_fill[rng_.below(gap_fill.size())];

    Sentence sentence;
    std::vector<Span> spans(entity_types.size());
    std::vector<int> cue_position(triples.size());
    auto emit_fillers = [&](int n) {
      for (int k = 0; k < n; ++k) sentence.tokens.push_back(lex_.fillers[rng_.below(lex_.fillers.size())]);
    };
    for (std::size_t p = 0; p < pieces.size(); ++p) {
      emit_fillers(gap_fill[p]);
      const Piece& piece = pieces[p];
      if (piece.kind == Piece::Kind::Entity) {
        const auto e = static_cast<std::size_t>(piece.index);
        const auto& pool = lex_.entities[static_cast<std::size_t>(entity_types[e])];
        const int start = sentence.length();
        for (int k = 0; k < entity_lengths[e]; ++k) sentence.tokens.push_back(pool[rng_.below(pool.size())]);
        spans[e] = Span{start, sentence.length()};
      } else {
        const auto t = static_cast<std::size_t>(piece.index);
        const auto& cues = lex_.cues[static_cast<std::size_t>(triples[t].relation)];
        cue_position[t] = sentence.length();
        sentence.tokens.push_back(cues[rng_.below(cues.size())]);
      }
    }
    emit_fillers(gap_fill.back());

    // Gold in indicator order.
    std::vector<std::size_t> order(triples.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cue_position[a] < cue_position[b]; });
    for (std::size_t t : order) {
      sentence.gold.push_back(Triple{spans[static_cast<std::size_t>(triples[t].source)], triples[t].relation,
                                     spans[static_cast<std::size_t>(triples[t].target)]});
    }
    return sentence;
  }

 private:
  const SynthConfig& config_;
  const Lexicon& lex_;
  Rng& rng_;
};

}  // namespace

std::vector<Sentence> generate_synthetic(const SynthConfig& config, std::uint64_t seed, int count) {
  validate(config);
  const int n = count >= 0 ? count : config.sentences;
  const Lexicon lexicon = make_lexicon(config);
  Rng rng(seed);

  const auto counts = class_counts(config, n);
  std::vector<OverlapClass> plan;
  for (std::size_t i = 0; i < 4; ++i) plan.insert(plan.end(), static_cast<std::size_t>(counts[i]), kClasses[i]);
  rng.shuffle(plan);

  SentenceBuilder builder(config, lexicon, rng);
  std::vector<Sentence> sentences;
  sentences.reserve(plan.size());
  for (OverlapClass overlap : plan) sentences.push_back(builder.build(overlap));
  return sentences;
}

}  // namespace hrl
