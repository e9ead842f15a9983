#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "hrl/corpus.hpp"

namespace hrl {

/// Role-aware entity tags: ({S, T, O} × {B, I}) ∪ {N}.
enum class EntityTag : std::uint8_t { BeginSource, InsideSource, BeginTarget, InsideTarget, BeginOther, InsideOther, None };

inline constexpr int kTagCount = 7;

inline constexpr std::array<EntityTag, kTagCount> kAllTags = {
    EntityTag::BeginSource, EntityTag::InsideSource, EntityTag::BeginTarget, EntityTag::InsideTarget,
    EntityTag::BeginOther,  EntityTag::InsideOther,  EntityTag::None};

using TagSequence = std::vector<EntityTag>;

std::string_view to_string(EntityTag tag);
/// Accepts "B-S", "I-S", "B-T", "I-T", "B-O", "I-O", "N".
std::optional<EntityTag> parse_tag(std::string_view name);

inline constexpr int tag_index(EntityTag tag) { return static_cast<int>(tag); }
inline constexpr EntityTag tag_at(int index) { return static_cast<EntityTag>(index); }

struct GoldTagging {
  TagSequence tags;
  /// Index into Sentence::gold of the triple this subtask targets.
  std::optional<std::size_t> matched;
};

/// Gold tag sequence for a subtask launched with `relation`.
///
/// Picks the first gold triple of that type (document order) not in
/// `consumed`; its arguments get S/T roles and every other gold entity span
/// gets O. Without such a triple, all gold entity spans are O.
GoldTagging gold_tags(const Sentence& sentence, RelationTypeId relation, const std::set<std::size_t>& consumed);

enum class DecodeMode { Strict, Lenient };

class MalformedTagsError : public std::runtime_error {
 public:
  MalformedTagsError(std::size_t position, const std::string& what)
      : std::runtime_error(what), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

struct DecodedSpans {
  std::vector<Span> sources;
  std::vector<Span> targets;
};

/// Maximal B-x (I-x)* runs per role. An I-x that does not continue a run of
/// the same role throws in Strict mode and starts a new run in Lenient mode.
DecodedSpans decode_spans(const TagSequence& tags, DecodeMode mode = DecodeMode::Strict);

/// (earliest source, relation, earliest target), or nothing if a role is missing.
std::optional<Triple> assemble_triple(RelationTypeId relation, const std::vector<Span>& sources,
                                      const std::vector<Span>& targets);

}  // namespace hrl
