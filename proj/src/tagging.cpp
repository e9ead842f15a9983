#include "hrl/tagging.hpp"

#include <algorithm>
#include <string>

namespace hrl {

namespace {

constexpr std::array<std::string_view, kTagCount> kTagNames = {"B-S", "I-S", "B-T", "I-T", "B-O", "I-O", "N"};

enum class Role { Source, Target, Other, None };

Role role_of(EntityTag tag) {
  switch (tag) {
    case EntityTag::BeginSource:
    case EntityTag::InsideSource: return Role::Source;
    case EntityTag::BeginTarget:
    case EntityTag::InsideTarget: return Role::Target;
    case EntityTag::BeginOther:
    case EntityTag::InsideOther: return Role::Other;
    case EntityTag::None: return Role::None;
  }
  return Role::None;
}

bool is_inside(EntityTag tag) {
  return tag == EntityTag::InsideSource || tag == EntityTag::InsideTarget || tag == EntityTag::InsideOther;
}

void mark(TagSequence& tags, const Span& span, EntityTag begin, EntityTag inside) {
  tags[static_cast<std::size_t>(span.start)] = begin;
  for (int i = span.start + 1; i < span.end; ++i) tags[static_cast<std::size_t>(i)] = inside;
}

}  // namespace

std::string_view to_string(EntityTag tag) { return kTagNames[static_cast<std::size_t>(tag_index(tag))]; }

std::optional<EntityTag> parse_tag(std::string_view name) {
  for (int i = 0; i < kTagCount; ++i) {
    if (kTagNames[static_cast<std::size_t>(i)] == name) return tag_at(i);
  }
  return std::nullopt;
}

GoldTagging gold_tags(const Sentence& sentence, RelationTypeId relation, const std::set<std::size_t>& consumed) {
  GoldTagging result;
  result.tags.assign(sentence.tokens.size(), EntityTag::None);
  for (std::size_t i = 0; i < sentence.gold.size(); ++i) {
    if (sentence.gold[i].relation == relation && !consumed.contains(i)) {
      result.matched = i;
      break;
    }
  }
  for (std::size_t i = 0; i < sentence.gold.size(); ++i) {
    if (result.matched == i) continue;
    mark(result.tags, sentence.gold[i].source, EntityTag::BeginOther, EntityTag::InsideOther);
    mark(result.tags, sentence.gold[i].target, EntityTag::BeginOther, EntityTag::InsideOther);
  }
  // Roles of the matched triple win over O.
  if (result.matched) {
    const Triple& t = sentence.gold[*result.matched];
    mark(result.tags, t.source, EntityTag::BeginSource, EntityTag::InsideSource);
    mark(result.tags, t.target, EntityTag::BeginTarget, EntityTag::InsideTarget);
  }
  return result;
}

DecodedSpans decode_spans(const TagSequence& tags, DecodeMode mode) {
  DecodedSpans out;
  Role open = Role::None;
  int start = 0;
  auto close = [&](int end) {
    if (open == Role::Source) out.sources.push_back(Span{start, end});
    if (open == Role::Target) out.targets.push_back(Span{start, end});
    open = Role::None;
  };
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const EntityTag tag = tags[i];
    const Role role = role_of(tag);
    const int pos = static_cast<int>(i);
    if (is_inside(tag) && role == open) continue;
    if (is_inside(tag) && mode == DecodeMode::Strict) {
      throw MalformedTagsError(i, "orphan " + std::string(to_string(tag)) + " at position " + std::to_string(i));
    }
    close(pos);
    if (role != Role::None) {
      open = role;
      start = pos;
    }
  }
  close(static_cast<int>(tags.size()));
  return out;
}

std::optional<Triple> assemble_triple(RelationTypeId relation, const std::vector<Span>& sources,
                                      const std::vector<Span>& targets) {
  if (sources.empty() || targets.empty()) return std::nullopt;
  return Triple{*std::min_element(sources.begin(), sources.end()), relation,
                *std::min_element(targets.begin(), targets.end())};
}

}  // namespace hrl
