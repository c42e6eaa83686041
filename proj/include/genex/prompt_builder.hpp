#pragma once

#include <string>
#include <vector>

#include "genex/corpus.hpp"
#include "genex/schema.hpp"
#include "genex/tokens.hpp"

namespace genex {

struct SeparatorToken {
  std::string text{kDefaultSeparator};
};

/// Segments joined by the separator; the sentence is always the last segment.
struct Prompt {
  std::vector<TokenSeq> segments;
  TokenSeq rendered;
  bool operator==(const Prompt&) const = default;
};

Prompt make_prompt(std::vector<TokenSeq> segments, const SeparatorToken& sep);

/// Sentence tokens only.
Prompt etd_prompt(const Sentence& s);
/// `ET sep Sent`
Prompt trigger_prompt(const EventType& et, const Sentence& s, const SeparatorToken& sep = {});
/// `ET sep RT sep Sent`. With a schema, throws RoleMismatchError unless rt is a role of et.
Prompt argument_prompt(const EventType& et, const RoleType& rt, const Sentence& s,
                       const SeparatorToken& sep = {}, const EventSchema* schema = nullptr);

}  // namespace genex
