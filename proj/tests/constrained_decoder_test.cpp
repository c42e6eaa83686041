#include <doctest.h>

#include <deque>
#include <random>

#include "genex/constrained_decoder.hpp"
#include "genex/error.hpp"
#include "oracles.hpp"

using namespace genex;

namespace {

DecodeState advance(const TokenSeq& toks, const TokenTrie& trie, const DecodeOptions& opts = {}) {
  DecodeState st;
  for (const auto& t : toks) st = step(st, t, trie, opts);
  return st;
}

// Returns fixed scores chosen by position in `allowed`.
class ScriptedBackend final : public ScoringBackend {
 public:
  explicit ScriptedBackend(std::vector<Token> preferred) : preferred_(std::move(preferred)) {}
  std::vector<double> score(const ScoreQuery& q) override {
    std::vector<double> out(q.allowed.size(), 0.0);
    for (std::size_t i = 0; i < q.allowed.size(); ++i) {
      if (cursor_ < preferred_.size() && q.allowed[i] == preferred_[cursor_]) out[i] = 1.0;
    }
    ++cursor_;
    return out;
  }
  BackendCapabilities capabilities() const override { return {}; }

 private:
  std::vector<Token> preferred_;
  std::size_t cursor_ = 0;
};

}  // namespace

TEST_CASE("legal_tokens examples") {
  auto trie = build_trie({{"CON", "VIC", "T"}});
  CHECK(legal_tokens(DecodeState{}, trie) == std::vector<Token>{"("});
  CHECK(legal_tokens(advance({"(", "("}, trie), trie) == std::vector<Token>{")", "CON"});

  auto single = build_trie({{"CONVICT"}, {"ATTACK"}});
  auto after_item = advance({"(", "(", "CONVICT", ")"}, single);
  CHECK(after_item.completed_items == std::vector<TokenSeq>{{"CONVICT"}});
  CHECK(legal_tokens(after_item, single) == std::vector<Token>{"(", ")"});

  CHECK(legal_tokens(advance({"(", "(", "CON"}, trie), trie) == std::vector<Token>{"VIC"});
  CHECK(legal_tokens(advance({"(", "(", "CON", "VIC", "T"}, trie), trie) == std::vector<Token>{")"});
  // At depth 1 with no items only a new group may open.
  CHECK(legal_tokens(advance({"("}, trie), trie) == std::vector<Token>{"("});
  // After the second opening with an item already complete, `)` would make an empty group.
  CHECK(legal_tokens(advance({"(", "(", "CON", "VIC", "T", ")", "("}, trie), trie) == std::vector<Token>{"CON"});
  CHECK(legal_tokens(advance({"(", "(", ")"}, trie), trie) == std::vector<Token>{")"});
}

TEST_CASE("legal_tokens honors allow_empty_output and max_items") {
  auto trie = build_trie({{"a"}});
  DecodeOptions no_empty{0, 8, false};
  CHECK(legal_tokens(advance({"(", "("}, trie, no_empty), trie, no_empty) == std::vector<Token>{"a"});
  CHECK_THROWS_AS(legal_tokens(advance({"(", "("}, build_trie({}), no_empty), build_trie({}), no_empty),
                  DecodeDeadEndError);

  DecodeOptions two{0, 2, true};
  auto st = advance({"(", "(", "a", ")", "(", "a", ")"}, trie, two);
  CHECK(legal_tokens(st, trie, two) == std::vector<Token>{")"});
}

TEST_CASE("step transitions") {
  auto trie = build_trie({{"CON", "VIC", "T"}, {"AT", "TACK"}});
  auto st = step(DecodeState{}, "(", trie);
  CHECK(st.depth == 1);

  auto mid = advance({"(", "(", "CON", "VIC", "T"}, trie);
  CHECK(mid.depth == 2);
  auto closed = step(mid, ")", trie);
  CHECK(closed.depth == 1);
  CHECK(closed.completed_items == std::vector<TokenSeq>{{"CON", "VIC", "T"}});
  CHECK(closed.current_item.empty());

  auto two = advance({"(", "(", "CON", "VIC", "T", ")", "(", "AT", "TACK", ")"}, trie);
  auto done = step(two, ")", trie);
  CHECK(done.finished);
  CHECK(done.depth == 0);

  CHECK_THROWS_AS(step(DecodeState{}, ")", trie), IllegalTokenError);
  CHECK_THROWS_AS(step(advance({"(", "("}, trie), "VIC", trie), IllegalTokenError);
  CHECK_THROWS_AS(step(advance({"(", "(", "CON"}, trie), ")", trie), IllegalTokenError);
  CHECK_THROWS_AS(legal_tokens(done, trie), DecodeError);
}

TEST_CASE("decode_greedy with oracle backends") {
  auto trie = build_trie({{"CONVICT"}, {"ATTACK"}});
  OracleBackend gold(ParenList{{{"CONVICT"}, {"ATTACK"}}});
  auto out = decode_greedy(gold, {}, trie);
  CHECK(serialize(out.items) == "((CONVICT)(ATTACK))");
  CHECK(render(out.emitted) == "((CONVICT)(ATTACK))");
  CHECK(out.score == doctest::Approx(8.0));

  OracleBackend empty(ParenList{});
  auto none = decode_greedy(empty, {}, trie);
  CHECK(none.items.empty());
  CHECK(render(none.emitted) == "(())");
}

TEST_CASE("uniform backend follows the documented tie rule") {
  // Hand trace: `(` forced, `(` forced, then {`)`, a} tie -> `)` (structural
  // tokens sort first), then only `)` is legal.
  UniformBackend uniform;
  auto out = decode_greedy(uniform, {}, build_trie({{"a"}}));
  CHECK(out.items.empty());
  CHECK(out.emitted == TokenSeq{"(", "(", ")", ")"});

  // Without the empty branch the tie at depth 1 picks `(` over `)` until max_items.
  DecodeOptions no_empty{0, 2, false};
  auto forced = decode_greedy(uniform, {}, build_trie({{"a"}, {"b"}}), no_empty);
  CHECK(serialize(forced.items) == "((a)(a))");
}

TEST_CASE("decode_greedy limits and errors") {
  auto trie = build_trie({{"a"}});
  CHECK(default_max_steps(trie, 8) == 2 + 8 * 3);
  ScriptedBackend always_open({"(", "(", "a", ")", "(", "a", ")", "(", "a", ")"});
  CHECK_THROWS_AS(decode_greedy(always_open, {}, trie, DecodeOptions{5, 8, true}), MaxStepsExceededError);
  CHECK_THROWS_AS(decode_greedy(always_open, {}, trie, DecodeOptions{0, 0, true}), ValidationError);

  class Short final : public ScoringBackend {
   public:
    std::vector<double> score(const ScoreQuery&) override { return {}; }
    BackendCapabilities capabilities() const override { return {}; }
  } short_backend;
  CHECK_THROWS_AS(decode_greedy(short_backend, {}, trie), LengthMismatchError);
}

TEST_CASE("no dead ends over every reachable state of small tries") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    auto cands = oracle::random_candidates(rng, 5, 3, 3);
    auto trie = build_trie({cands.begin(), cands.end()});
    for (bool allow_empty : {true, false}) {
      DecodeOptions opts{0, 3, allow_empty};
      std::deque<DecodeState> frontier{DecodeState{}};
      std::size_t visited = 0;
      while (!frontier.empty()) {
        auto st = frontier.front();
        frontier.pop_front();
        ++visited;
        if (st.finished) {
          CHECK(st.depth == 0);
          continue;
        }
        std::vector<Token> legal;
        CHECK_NOTHROW(legal = legal_tokens(st, trie, opts));
        CHECK_FALSE(legal.empty());
        for (const auto& t : legal) frontier.push_back(step(st, t, trie, opts));
      }
      CHECK(visited > 4);
    }
  }
}

TEST_CASE("legal sets equal the enumerated output tree and greedy equals the tree walk") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    auto cands = oracle::random_candidates(rng, 3, 3, 4);
    auto trie = build_trie({cands.begin(), cands.end()});
    DecodeOptions opts{0, 2, true};
    auto outputs = oracle::enumerate_outputs(cands, 2, true);

    // Every prefix of every output: FSM legal set equals the tree's branching.
    for (const auto& o : outputs) {
      DecodeState st;
      TokenSeq prefix;
      for (const auto& t : o) {
        CHECK(legal_tokens(st, trie, opts) == oracle::next_tokens(outputs, prefix));
        st = step(st, t, trie, opts);
        prefix.push_back(t);
      }
      CHECK(st.finished);
    }

    FuzzBackend fuzz(static_cast<std::uint64_t>(trial));
    auto out = decode_greedy(fuzz, {"p"}, trie, opts);
    CHECK(out.emitted == oracle::greedy_walk(fuzz, {"p"}, outputs));
  }
}

TEST_CASE("decode_beam") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    auto cands = oracle::random_candidates(rng, 8, 3);
    auto trie = build_trie({cands.begin(), cands.end()});
    FuzzBackend fuzz(1000 + static_cast<std::uint64_t>(trial));
    auto greedy = decode_greedy(fuzz, {"q"}, trie);
    auto beam = decode_beam(fuzz, {"q"}, trie, 1);
    REQUIRE(beam.size() == 1);
    CHECK(beam.front() == greedy);
  }

  auto trie = build_trie({{"CON", "VIC", "T"}, {"AT", "TACK"}});
  FuzzBackend fuzz(5);
  auto beams = decode_beam(fuzz, {}, trie, 3);
  REQUIRE(beams.size() == 3);
  for (const auto& b : beams) {
    CHECK(beams.front().score >= b.score);
    CHECK(parse(render(b.emitted)) == b.items);
    for (const auto& item : b.items.items) CHECK(trie.contains(item));
  }
  CHECK_THROWS_AS(decode_beam(fuzz, {}, trie, 0), ValidationError);
}

TEST_CASE("wide beam returns the full ranked enumeration") {
  std::vector<TokenSeq> cands{{"a"}, {"b", "c"}};
  auto trie = build_trie({cands.begin(), cands.end()});
  DecodeOptions opts{0, 2, true};
  auto outputs = oracle::enumerate_outputs(cands, 2, true);
  REQUIRE(outputs.size() == 7);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    FuzzBackend fuzz(seed);
    auto expected = oracle::ranked_outputs(fuzz, {"x"}, outputs);
    auto got = decode_beam(fuzz, {"x"}, trie, 16, opts);
    REQUIRE(got.size() == expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].emitted == expected[i].emitted);
      CHECK(got[i].score == doctest::Approx(expected[i].score).epsilon(1e-12));
    }
  }
}

TEST_CASE("closure under fuzz, including subword splits") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    auto cands = oracle::random_candidates(rng, 20, 4);
    auto trie = build_trie({cands.begin(), cands.end()});
    FuzzBackend fuzz(static_cast<std::uint64_t>(trial) * 7919);
    auto out = decode_greedy(fuzz, {}, trie);
    CHECK(parse(render(out.emitted)) == out.items);
    for (const auto& item : out.items.items) CHECK(trie.contains(item));
  }
  // Subwords CON VIC T never recombine into T CON ... or CON T VIC.
  auto trie = build_trie({{"CON", "VIC", "T"}, {"AT", "TACK"}, {"T", "AT"}});
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    FuzzBackend fuzz(seed);
    for (const auto& item : decode_greedy(fuzz, {}, trie).items.items) CHECK(trie.contains(item));
  }
}

TEST_CASE("determinism") {
  auto trie = build_trie({{"x", "y"}, {"x"}, {"z"}});
  FuzzBackend a(99), b(99);
  CHECK(decode_greedy(a, {"p"}, trie) == decode_greedy(b, {"p"}, trie));
  CHECK(decode_beam(a, {"p"}, trie, 4) == decode_beam(b, {"p"}, trie, 4));
}
