#pragma once

#include <cstddef>
#include <vector>

#include "genex/backends.hpp"
#include "genex/paren_codec.hpp"
#include "genex/token_trie.hpp"
#include "genex/tokens.hpp"

namespace genex {

struct DecodeOptions {
  /// 0 selects default_max_steps(trie, max_items).
  std::size_t max_steps = 0;
  std::size_t max_items = 8;
  /// Whether `(())` may be produced.
  bool allow_empty_output = true;
};

/// Finite-state view of a partially emitted parenthesis representation. The
/// depth is the number of emitted `(` minus emitted `)`.
struct DecodeState {
  int depth = 0;
  std::vector<TokenSeq> completed_items;
  TokenSeq current_item;
  bool finished = false;
  // Set after `((` `)`: only the outer `)` may follow.
  bool closed_empty_group = false;
  std::size_t emitted_count = 0;

  bool operator==(const DecodeState&) const = default;
};

/// Tokens the grammar and trie permit in `st`, ordered by token_less.
/// Throws DecodeDeadEndError when nothing is legal.
std::vector<Token> legal_tokens(const DecodeState& st, const TokenTrie& trie,
                                const DecodeOptions& opts = {});

/// Advances `st` by `token`; throws IllegalTokenError if it is not legal.
DecodeState step(const DecodeState& st, const Token& token, const TokenTrie& trie,
                 const DecodeOptions& opts = {});

struct DecodeOutput {
  ParenList items;
  TokenSeq emitted;
  double score = 0.0;
  bool operator==(const DecodeOutput&) const = default;
};

/// 2 + max_items * (max_candidate_len + 2).
std::size_t default_max_steps(const TokenTrie& trie, std::size_t max_items);

DecodeOutput decode_greedy(ScoringBackend& backend, const TokenSeq& prompt, const TokenTrie& trie,
                           const DecodeOptions& opts = {});

/// Constrained beam search. Returns finished hypotheses, best first (score
/// descending, then emitted sequence under token_less). beam_size 1 is greedy.
std::vector<DecodeOutput> decode_beam(ScoringBackend& backend, const TokenSeq& prompt,
                                      const TokenTrie& trie, std::size_t beam_size,
                                      const DecodeOptions& opts = {});

}  // namespace genex
