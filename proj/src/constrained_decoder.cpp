#include "genex/constrained_decoder.hpp"

#include <algorithm>

#include "genex/error.hpp"

namespace genex {

namespace {

void check_options(const DecodeOptions& opts) {
  if (opts.max_items == 0) throw ValidationError("max_items must be at least 1");
}

std::size_t step_limit(const TokenTrie& trie, const DecodeOptions& opts) {
  return opts.max_steps != 0 ? opts.max_steps : default_max_steps(trie, opts.max_items);
}

std::vector<double> query(ScoringBackend& backend, const TokenSeq& prompt, const TokenSeq& emitted,
                          std::vector<Token> allowed) {
  ScoreQuery q{prompt, emitted, std::move(allowed)};
  auto scores = backend.score(q);
  if (scores.size() != q.allowed.size()) {
    throw LengthMismatchError("backend returned " + std::to_string(scores.size()) + " scores for " +
                              std::to_string(q.allowed.size()) + " allowed tokens");
  }
  return scores;
}

bool emitted_less(const TokenSeq& a, const TokenSeq& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      [](const Token& x, const Token& y) { return token_less(x, y); });
}

}  // namespace

std::vector<Token> legal_tokens(const DecodeState& st, const TokenTrie& trie, const DecodeOptions& opts) {
  if (st.finished) throw DecodeError("legal_tokens queried on a finished state");
  std::vector<Token> out;
  switch (st.depth) {
    case 0:
      out.emplace_back(kOpenParen);
      break;
    case 1:
      if (st.closed_empty_group) {
        out.emplace_back(kCloseParen);
        break;
      }
      if (st.completed_items.size() < opts.max_items) out.emplace_back(kOpenParen);
      if (!st.completed_items.empty()) out.emplace_back(kCloseParen);
      break;
    case 2: {
      auto next = trie.allowed_next(st.current_item);
      bool may_close = st.current_item.empty() ? (st.completed_items.empty() && opts.allow_empty_output)
                                               : next.may_terminate;
      if (may_close) out.emplace_back(kCloseParen);
      out.insert(out.end(), std::make_move_iterator(next.tokens.begin()),
                 std::make_move_iterator(next.tokens.end()));
      break;
    }
    default:
      throw DecodeError("invalid decode depth " + std::to_string(st.depth));
  }
  if (out.empty()) throw DecodeDeadEndError("no legal continuation");
  return out;
}

DecodeState step(const DecodeState& st, const Token& token, const TokenTrie& trie, const DecodeOptions& opts) {
  auto legal = legal_tokens(st, trie, opts);
  if (std::find(legal.begin(), legal.end(), token) == legal.end()) {
    throw IllegalTokenError("token '" + token + "' is not legal in the current decode state");
  }
  DecodeState next = st;
  ++next.emitted_count;
  if (token == kOpenParen) {
    ++next.depth;
    next.current_item.clear();
  } else if (token == kCloseParen) {
    if (next.depth == 2) {
      if (next.current_item.empty()) {
        next.closed_empty_group = true;
      } else {
        next.completed_items.push_back(std::move(next.current_item));
        next.current_item.clear();
      }
    } else {
      next.finished = true;
    }
    --next.depth;
  } else {
    next.current_item.push_back(token);
  }
  return next;
}

std::size_t default_max_steps(const TokenTrie& trie, std::size_t max_items) {
  return 2 + max_items * (trie.max_length() + 2);
}

DecodeOutput decode_greedy(ScoringBackend& backend, const TokenSeq& prompt, const TokenTrie& trie,
                           const DecodeOptions& opts) {
  check_options(opts);
  const auto limit = step_limit(trie, opts);
  DecodeState st;
  DecodeOutput out;
  while (!st.finished) {
    if (out.emitted.size() >= limit) {
      throw MaxStepsExceededError("decode exceeded " + std::to_string(limit) + " steps");
    }
    auto allowed = legal_tokens(st, trie, opts);
    auto scores = query(backend, prompt, out.emitted, allowed);
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
      if (scores[i] > scores[best]) best = i;
    }
    st = step(st, allowed[best], trie, opts);
    out.emitted.push_back(std::move(allowed[best]));
    out.score += scores[best];
  }
  out.items.items = std::move(st.completed_items);
  return out;
}

std::vector<DecodeOutput> decode_beam(ScoringBackend& backend, const TokenSeq& prompt, const TokenTrie& trie,
                                      std::size_t beam_size, const DecodeOptions& opts) {
  check_options(opts);
  if (beam_size == 0) throw ValidationError("beam_size must be at least 1");
  const auto limit = step_limit(trie, opts);

  struct Hyp {
    DecodeState state;
    TokenSeq emitted;
    double score = 0.0;
  };
  auto better = [](const Hyp& a, const Hyp& b) {
    if (a.score != b.score) return a.score > b.score;
    return emitted_less(a.emitted, b.emitted);
  };

  std::vector<Hyp> finished;
  std::vector<Hyp> live{Hyp{}};
  while (!live.empty()) {
    std::vector<Hyp> pool = std::move(finished);
    finished.clear();
    for (const auto& h : live) {
      if (h.emitted.size() >= limit) {
        throw MaxStepsExceededError("decode exceeded " + std::to_string(limit) + " steps");
      }
      auto allowed = legal_tokens(h.state, trie, opts);
      auto scores = query(backend, prompt, h.emitted, allowed);
      for (std::size_t i = 0; i < allowed.size(); ++i) {
        Hyp n{step(h.state, allowed[i], trie, opts), h.emitted, h.score + scores[i]};
        n.emitted.push_back(allowed[i]);
        pool.push_back(std::move(n));
      }
    }
    std::sort(pool.begin(), pool.end(), better);
    if (pool.size() > beam_size) pool.resize(beam_size);
    live.clear();
    for (auto& h : pool) (h.state.finished ? finished : live).push_back(std::move(h));
  }

  std::sort(finished.begin(), finished.end(), better);
  std::vector<DecodeOutput> out;
  out.reserve(finished.size());
  for (auto& h : finished) {
    out.push_back(DecodeOutput{ParenList{std::move(h.state.completed_items)}, std::move(h.emitted), h.score});
  }
  return out;
}

}  // namespace genex
