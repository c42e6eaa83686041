#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "genex/corpus.hpp"
#include "genex/tokens.hpp"

namespace genex {

struct NextTokens {
  std::vector<Token> tokens;  // sorted bytewise
  bool may_terminate = false;
  bool operator==(const NextTokens&) const = default;
};

/// Prefix tree over candidate token sequences. Nodes live in a flat vector;
/// node 0 is the root.
class TokenTrie {
 public:
  TokenTrie();

  /// Throws EmptyCandidateError / IllegalTokenError.
  void insert(const TokenSeq& seq);

  NextTokens allowed_next(const TokenSeq& prefix) const;
  bool contains(const TokenSeq& seq) const;

  bool empty() const { return num_candidates_ == 0; }
  std::size_t num_candidates() const { return num_candidates_; }
  /// Length of the longest candidate (0 for an empty trie).
  std::size_t max_length() const { return max_length_; }
  std::size_t num_nodes() const { return nodes_.size(); }

 private:
  struct Node {
    std::map<Token, std::size_t> children;
    bool terminal = false;
  };

  // Index of the node reached by `prefix`, or npos.
  std::size_t walk(const TokenSeq& prefix) const;

  std::vector<Node> nodes_;
  std::size_t num_candidates_ = 0;
  std::size_t max_length_ = 0;
};

TokenTrie build_trie(const std::set<TokenSeq>& candidates);

/// All distinct contiguous token subsequences of `s` with length in [1, max_len].
std::set<TokenSeq> span_candidates(const Sentence& s, std::size_t max_len);

}  // namespace genex
