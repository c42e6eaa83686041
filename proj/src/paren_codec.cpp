#include "genex/paren_codec.hpp"

#include <cctype>

#include "genex/error.hpp"

namespace genex {

std::string serialize(const ParenList& p) {
  if (p.items.empty()) return "(())";
  std::string out = "(";
  for (const auto& item : p.items) {
    if (item.empty()) throw IllegalTokenError("empty item in ParenList");
    for (const auto& t : item) {
      if (!is_content_token(t)) throw IllegalTokenError("illegal token '" + t + "' in ParenList item");
    }
    out += '(';
    out += join(item);
    out += ')';
  }
  out += ')';
  return out;
}

TokenSeq to_token_stream(const ParenList& p) {
  TokenSeq out{Token(kOpenParen)};
  if (p.items.empty()) {
    out.insert(out.end(), {Token(kOpenParen), Token(kCloseParen)});
  }
  for (const auto& item : p.items) {
    out.emplace_back(kOpenParen);
    out.insert(out.end(), item.begin(), item.end());
    out.emplace_back(kCloseParen);
  }
  out.emplace_back(kCloseParen);
  return out;
}

std::string render(const TokenSeq& emitted) {
  std::string out;
  bool prev_content = false;
  for (const auto& t : emitted) {
    bool content = !is_structural(t);
    if (content && prev_content) out += ' ';
    out += t;
    prev_content = content;
  }
  return out;
}

ParenList parse(std::string_view s) {
  enum class Where { kStart, kOuter, kItem, kAfterEmpty, kDone };
  Where where = Where::kStart;
  ParenList out;
  TokenSeq current;

  auto on_content = [&](std::string_view tok) {
    if (where != Where::kItem) {
      throw MisplacedContentError("content '" + std::string(tok) + "' outside an item group");
    }
    current.emplace_back(tok);
  };

  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '(') {
      switch (where) {
        case Where::kStart: where = Where::kOuter; break;
        case Where::kOuter: where = Where::kItem; break;
        case Where::kItem: throw ParseError("nesting deeper than two levels at offset " + std::to_string(i));
        case Where::kAfterEmpty: throw EmptyItemError("'(())' must be the entire value");
        case Where::kDone: throw MisplacedContentError("trailing content after the closing parenthesis");
      }
      ++i;
      continue;
    }
    if (c == ')') {
      switch (where) {
        case Where::kStart: throw UnbalancedParensError("unexpected ')' at offset " + std::to_string(i));
        case Where::kOuter:
          if (out.items.empty()) throw EmptyItemError("empty value must be written '(())'");
          where = Where::kDone;
          break;
        case Where::kItem:
          if (current.empty()) {
            if (!out.items.empty()) throw EmptyItemError("empty item group");
            where = Where::kAfterEmpty;
          } else {
            out.items.push_back(std::move(current));
            current.clear();
            where = Where::kOuter;
          }
          break;
        case Where::kAfterEmpty: where = Where::kDone; break;
        case Where::kDone: throw UnbalancedParensError("unexpected ')' at offset " + std::to_string(i));
      }
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < s.size() && s[j] != '(' && s[j] != ')' && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    on_content(s.substr(i, j - i));
    i = j;
  }
  if (where == Where::kStart) throw ParseError("empty input");
  if (where != Where::kDone) throw UnbalancedParensError("missing ')' at end of input");
  return out;
}

}  // namespace genex
