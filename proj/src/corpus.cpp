#include "hrl/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace hrl {

using nlohmann::json;

RelationSchema::RelationSchema(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i].empty()) throw CorpusError("relation schema: empty relation name");
    if (names_[i] == "NR") throw CorpusError("relation schema: \"NR\" is reserved");
    if (!index_.emplace(names_[i], static_cast<RelationTypeId>(i)).second) {
      throw CorpusError("relation schema: duplicate relation name \"" + names_[i] + "\"");
    }
  }
}

std::optional<RelationTypeId> RelationSchema::find(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string RelationSchema::option_name(OptionId option) const {
  if (option == kNoRelation) return "NR";
  return name(relation_of(option));
}

RelationSchema load_schema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open schema file " + path.string());
  try {
    const json doc = json::parse(in);
    return RelationSchema(doc.at("relation_types").get<std::vector<std::string>>());
  } catch (const json::exception& e) {
    throw CorpusError("schema file " + path.string() + ": " + e.what());
  }
}

void save_schema(const RelationSchema& schema, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw CorpusError("cannot write schema file " + path.string());
  out << json{{"relation_types", schema.names()}}.dump() << '\n';
}

void validate_sentence(const Sentence& sentence, int relation_count) {
  const int length = sentence.length();
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    if (sentence.tokens[i].empty()) throw CorpusError("empty token at index " + std::to_string(i));
  }
  auto check_span = [length](const Span& span, const char* role) {
    if (span.start < 0 || span.end <= span.start || span.end > length) {
      throw CorpusError(std::string(role) + " span [" + std::to_string(span.start) + "," + std::to_string(span.end) +
                        ") out of bounds for sentence of length " + std::to_string(length));
    }
  };
  for (const Triple& triple : sentence.gold) {
    check_span(triple.source, "source");
    check_span(triple.target, "target");
    if (triple.source == triple.target) throw CorpusError("source and target spans are identical");
    if (triple.relation < 0 || triple.relation >= relation_count) {
      throw CorpusError("relation id " + std::to_string(triple.relation) + " outside schema");
    }
  }
}

namespace {

Span parse_span(const json& value) {
  if (!value.is_array() || value.size() != 2) throw CorpusError("span must be a [start, end] pair");
  return Span{value[0].get<int>(), value[1].get<int>()};
}

Sentence parse_record(const std::string& line, const RelationSchema& schema) {
  const json record = json::parse(line);
  Sentence sentence;
  sentence.tokens = record.at("tokens").get<std::vector<std::string>>();
  if (record.contains("relations")) {
    for (const json& rel : record.at("relations")) {
      const auto name = rel.at("type").get<std::string>();
      const auto id = schema.find(name);
      if (!id) throw CorpusError("unknown relation type \"" + name + "\"");
      sentence.gold.push_back(Triple{parse_span(rel.at("source")), *id, parse_span(rel.at("target"))});
    }
  }
  validate_sentence(sentence, schema.relation_count());
  return sentence;
}

}  // namespace

std::vector<Sentence> parse_corpus(std::istream& in, const RelationSchema& schema, std::string_view source) {
  std::vector<Sentence> sentences;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    try {
      sentences.push_back(parse_record(line, schema));
    } catch (const json::exception& e) {
      throw CorpusError(std::string(source) + ":" + std::to_string(line_number) + ": parse error: " + e.what());
    } catch (const CorpusError& e) {
      throw CorpusError(std::string(source) + ":" + std::to_string(line_number) + ": " + e.what());
    }
  }
  return sentences;
}

std::vector<Sentence> load_corpus(const std::filesystem::path& path, const RelationSchema& schema) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open corpus file " + path.string());
  return parse_corpus(in, schema, path.string());
}

void write_corpus(std::ostream& out, const std::vector<Sentence>& sentences, const RelationSchema& schema) {
  for (const Sentence& sentence : sentences) {
    json relations = json::array();
    for (const Triple& t : sentence.gold) {
      relations.push_back({{"type", schema.name(t.relation)},
                           {"source", {t.source.start, t.source.end}},
                           {"target", {t.target.start, t.target.end}}});
    }
    out << json{{"tokens", sentence.tokens}, {"relations", relations}}.dump() << '\n';
  }
}

void save_corpus(const std::filesystem::path& path, const std::vector<Sentence>& sentences,
                 const RelationSchema& schema) {
  std::ofstream out(path);
  if (!out) throw CorpusError("cannot write corpus file " + path.string());
  write_corpus(out, sentences, schema);
}

FilteredCorpus filter_corpus(std::vector<Sentence> train, std::vector<Sentence> test) {
  std::set<RelationTypeId> test_types;
  for (const Sentence& s : test) {
    for (const Triple& t : s.gold) test_types.insert(t.relation);
  }
  for (Sentence& s : train) {
    std::erase_if(s.gold, [&](const Triple& t) { return !test_types.contains(t.relation); });
  }
  auto empty_gold = [](const Sentence& s) { return s.gold.empty(); };
  std::erase_if(train, empty_gold);
  std::erase_if(test, empty_gold);
  return {std::move(train), std::move(test)};
}

std::string_view to_string(OverlapClass overlap) {
  switch (overlap) {
    case OverlapClass::None: return "None";
    case OverlapClass::TypeI: return "TypeI";
    case OverlapClass::TypeII: return "TypeII";
    case OverlapClass::Mixed: return "Mixed";
  }
  return "None";
}

OverlapClass classify_overlap(const Sentence& sentence) {
  bool type1 = false;
  bool type2 = false;
  const auto& gold = sentence.gold;
  for (std::size_t a = 0; a < gold.size(); ++a) {
    for (std::size_t b = a + 1; b < gold.size(); ++b) {
      const std::set<Span> first{gold[a].source, gold[a].target};
      int shared = 0;
      for (const Span& span : {gold[b].source, gold[b].target}) shared += first.contains(span) ? 1 : 0;
      if (shared == 1) type1 = true;
      if (shared == 2) type2 = true;
    }
  }
  if (type1 && type2) return OverlapClass::Mixed;
  if (type1) return OverlapClass::TypeI;
  if (type2) return OverlapClass::TypeII;
  return OverlapClass::None;
}

std::map<std::string, int> overlap_histogram(const std::vector<Sentence>& sentences) {
  std::map<std::string, int> histogram;
  for (OverlapClass c : {OverlapClass::None, OverlapClass::TypeI, OverlapClass::TypeII, OverlapClass::Mixed}) {
    histogram[std::string(to_string(c))] = 0;
  }
  for (const Sentence& s : sentences) ++histogram[std::string(to_string(classify_overlap(s)))];
  return histogram;
}

}  // namespace hrl
