#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "genex/tokens.hpp"

namespace genex {

/// Parsed parenthesis representation `((a b)(c))`. An empty item list is the
/// empty extraction, written `(())`.
struct ParenList {
  std::vector<TokenSeq> items;
  bool empty() const { return items.empty(); }
  bool operator==(const ParenList&) const = default;
};

std::string serialize(const ParenList& p);

/// Strict inverse of serialize. Whitespace between tokens and groups is ignored.
ParenList parse(std::string_view s);

/// The structural token stream for `p`, e.g. `( ( a b ) )`.
TokenSeq to_token_stream(const ParenList& p);

/// Renders an emitted token stream as text: structural tokens verbatim, adjacent
/// content tokens separated by one space.
std::string render(const TokenSeq& emitted);

}  // namespace genex
