#include "genex/tokens.hpp"

#include <cctype>

namespace genex {

namespace {
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
}  // namespace

bool is_content_token(std::string_view tok) {
  if (tok.empty()) return false;
  for (char c : tok) {
    if (c == '(' || c == ')' || is_space(c)) return false;
  }
  return true;
}

bool token_less(std::string_view a, std::string_view b) {
  auto rank = [](std::string_view t) { return t == kOpenParen ? 0 : t == kCloseParen ? 1 : 2; };
  int ra = rank(a), rb = rank(b);
  if (ra != rb) return ra < rb;
  return a < b;
}

std::string join(const TokenSeq& toks, std::string_view delim) {
  std::string out;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (i) out += delim;
    out += toks[i];
  }
  return out;
}

TokenSeq split_whitespace(std::string_view text) {
  TokenSeq out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace genex
