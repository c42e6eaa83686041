#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace genex {

using Token = std::string;
using TokenSeq = std::vector<Token>;

inline constexpr std::string_view kOpenParen = "(";
inline constexpr std::string_view kCloseParen = ")";
inline constexpr std::string_view kDefaultSeparator = "</s>";

inline bool is_structural(std::string_view tok) { return tok == kOpenParen || tok == kCloseParen; }

/// True when `tok` is usable as content: non-empty, no parenthesis, no whitespace.
bool is_content_token(std::string_view tok);

/// Total order used for deterministic tie-breaking: `(` < `)` < content tokens (bytewise).
bool token_less(std::string_view a, std::string_view b);

std::string join(const TokenSeq& toks, std::string_view delim = " ");

TokenSeq split_whitespace(std::string_view text);

}  // namespace genex
