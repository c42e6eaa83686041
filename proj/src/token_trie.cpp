#include "genex/token_trie.hpp"

#include <algorithm>

#include "genex/error.hpp"

namespace genex {

namespace {
constexpr std::size_t kNone = static_cast<std::size_t>(-1);
}

TokenTrie::TokenTrie() : nodes_(1) {}

void TokenTrie::insert(const TokenSeq& seq) {
  if (seq.empty()) throw EmptyCandidateError("empty candidate sequence");
  for (const auto& t : seq) {
    if (!is_content_token(t)) throw IllegalTokenError("illegal candidate token '" + t + "'");
  }
  std::size_t node = 0;
  for (const auto& t : seq) {
    auto it = nodes_[node].children.find(t);
    if (it == nodes_[node].children.end()) {
      nodes_.emplace_back();
      it = nodes_[node].children.emplace(t, nodes_.size() - 1).first;
    }
    node = it->second;
  }
  if (!nodes_[node].terminal) {
    nodes_[node].terminal = true;
    ++num_candidates_;
    max_length_ = std::max(max_length_, seq.size());
  }
}

std::size_t TokenTrie::walk(const TokenSeq& prefix) const {
  std::size_t node = 0;
  for (const auto& t : prefix) {
    const auto& children = nodes_[node].children;
    auto it = children.find(t);
    if (it == children.end()) return kNone;
    node = it->second;
  }
  return node;
}

NextTokens TokenTrie::allowed_next(const TokenSeq& prefix) const {
  NextTokens out;
  auto node = walk(prefix);
  if (node == kNone) return out;
  out.tokens.reserve(nodes_[node].children.size());
  for (const auto& [tok, child] : nodes_[node].children) out.tokens.push_back(tok);
  out.may_terminate = nodes_[node].terminal;
  return out;
}

bool TokenTrie::contains(const TokenSeq& seq) const {
  auto node = walk(seq);
  return node != kNone && nodes_[node].terminal;
}

TokenTrie build_trie(const std::set<TokenSeq>& candidates) {
  TokenTrie t;
  for (const auto& c : candidates) t.insert(c);
  return t;
}

std::set<TokenSeq> span_candidates(const Sentence& s, std::size_t max_len) {
  std::set<TokenSeq> out;
  const auto n = s.tokens.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t len = 1; len <= max_len && i + len <= n; ++len) {
      out.emplace(s.tokens.begin() + static_cast<std::ptrdiff_t>(i),
                  s.tokens.begin() + static_cast<std::ptrdiff_t>(i + len));
    }
  }
  return out;
}

}  // namespace genex
