#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hrl {

using RelationTypeId = int;

/// Option index into {NR} ∪ R. NR is index 0; relation r maps to r + 1.
using OptionId = int;
inline constexpr OptionId kNoRelation = 0;

inline constexpr OptionId option_of(RelationTypeId relation) { return relation + 1; }
inline constexpr RelationTypeId relation_of(OptionId option) { return option - 1; }

/// Half-open token range [start, end).
struct Span {
  int start = 0;
  int end = 0;

  int length() const { return end - start; }
  bool contains(int position) const { return position >= start && position < end; }
  auto operator<=>(const Span&) const = default;
};

struct Triple {
  Span source;
  RelationTypeId relation = 0;
  Span target;

  auto operator<=>(const Triple&) const = default;
};

struct Sentence {
  std::vector<std::string> tokens;
  std::vector<Triple> gold;

  int length() const { return static_cast<int>(tokens.size()); }
  bool operator==(const Sentence&) const = default;
};

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ordered relation-type names; the option vocabulary is NR followed by these.
class RelationSchema {
 public:
  RelationSchema() = default;
  explicit RelationSchema(std::vector<std::string> names);

  const std::vector<std::string>& names() const { return names_; }
  int relation_count() const { return static_cast<int>(names_.size()); }
  int option_count() const { return relation_count() + 1; }

  std::optional<RelationTypeId> find(std::string_view name) const;
  const std::string& name(RelationTypeId relation) const { return names_.at(static_cast<std::size_t>(relation)); }
  /// "NR" for kNoRelation, else the relation name.
  std::string option_name(OptionId option) const;

  bool operator==(const RelationSchema& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::map<std::string, RelationTypeId, std::less<>> index_;
};

RelationSchema load_schema(const std::filesystem::path& path);
void save_schema(const RelationSchema& schema, const std::filesystem::path& path);

/// Parses line-delimited JSON records. `source` names the input in error messages.
std::vector<Sentence> parse_corpus(std::istream& in, const RelationSchema& schema,
                                   std::string_view source = "<stream>");
std::vector<Sentence> load_corpus(const std::filesystem::path& path, const RelationSchema& schema);

void write_corpus(std::ostream& out, const std::vector<Sentence>& sentences, const RelationSchema& schema);
void save_corpus(const std::filesystem::path& path, const std::vector<Sentence>& sentences,
                 const RelationSchema& schema);

/// Checks span bounds and the distinct-argument rule; throws CorpusError.
void validate_sentence(const Sentence& sentence, int relation_count);

struct FilteredCorpus {
  std::vector<Sentence> train;
  std::vector<Sentence> test;
};

/// Drops train triples whose type never occurs in test, then drops sentences
/// left without gold triples from both splits.
FilteredCorpus filter_corpus(std::vector<Sentence> train, std::vector<Sentence> test);

enum class OverlapClass { None, TypeI, TypeII, Mixed };

std::string_view to_string(OverlapClass overlap);
OverlapClass classify_overlap(const Sentence& sentence);

/// Count of sentences per class, keyed by to_string(OverlapClass).
std::map<std::string, int> overlap_histogram(const std::vector<Sentence>& sentences);

}  // namespace hrl
