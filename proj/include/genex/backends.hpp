#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "genex/corpus.hpp"
#include "genex/paren_codec.hpp"
#include "genex/schema.hpp"
#include "genex/tokenizer.hpp"
#include "genex/tokens.hpp"

namespace genex {

struct ScoreQuery {
  TokenSeq prompt;
  TokenSeq emitted;
  std::vector<Token> allowed;
};

struct BackendCapabilities {
  bool concurrent_query_safe = true;
  bool deterministic = true;
};

/// Next-token scorer standing in for a fine-tuned language model. Scores are raw
/// reals, higher is better, one per entry of `q.allowed` in the same order.
class ScoringBackend {
 public:
  virtual ~ScoringBackend() = default;
  virtual std::vector<double> score(const ScoreQuery& q) = 0;
  virtual BackendCapabilities capabilities() const = 0;
};

using BackendPtr = std::shared_ptr<ScoringBackend>;

/// Scores every token 0.0.
class UniformBackend final : public ScoringBackend {
 public:
  std::vector<double> score(const ScoreQuery& q) override;
  BackendCapabilities capabilities() const override { return {}; }
};

/// Replays gold targets. A query is on-path while its emitted prefix matches the
/// structural stream of the prompt's target: the next gold token scores 1.0 and
/// every other allowed token 0.0. Off-path (diverged, or the gold token is not
/// allowed) the fastest-closing token scores 0.0 and the rest -1.0, preferring
/// `)` before `(` before the smallest content token.
class OracleBackend final : public ScoringBackend {
 public:
  /// Single target, used for every prompt.
  explicit OracleBackend(ParenList target);
  /// Per-prompt targets; prompts not in the map use `fallback`.
  OracleBackend(std::map<TokenSeq, ParenList> by_prompt, ParenList fallback);

  std::vector<double> score(const ScoreQuery& q) override;
  BackendCapabilities capabilities() const override { return {}; }

  std::size_t num_targets() const { return streams_.size(); }

 private:
  std::map<TokenSeq, TokenSeq> streams_;
  TokenSeq fallback_;
};

BackendPtr oracle_from_gold(const ParenList& target);

enum class Stage { kEtd, kTrigger, kArgument };
const char* stage_name(Stage s);
Stage parse_stage(std::string_view name);

/// Gold oracle for one pipeline stage over a whole corpus: keys every positive
/// prompt of that stage to its gold target at `tokenizer` granularity.
BackendPtr oracle_from_corpus(const std::vector<AnnotatedSentence>& corpus,
                              const EventSchema& schema, Stage stage,
                              std::string_view sep = kDefaultSeparator,
                              const Tokenizer& tokenizer = WhitespaceTokenizer{});

/// Deterministic pseudo-random scores in [0, 1) keyed on (seed, query, token).
class FuzzBackend final : public ScoringBackend {
 public:
  explicit FuzzBackend(std::uint64_t seed) : seed_(seed) {}
  std::vector<double> score(const ScoreQuery& q) override;
  BackendCapabilities capabilities() const override { return {}; }

 private:
  std::uint64_t seed_;
};

BackendPtr fuzz_backend(std::uint64_t seed);

/// HTTP client for `POST <endpoint>/v1/score`. Not safe for concurrent queries.
class RemoteBackend final : public ScoringBackend {
 public:
  /// `endpoint` is `http://host[:port][/prefix]`; throws ValidationError otherwise.
  RemoteBackend(const std::string& endpoint, std::chrono::milliseconds timeout);
  ~RemoteBackend() override;

  std::vector<double> score(const ScoreQuery& q) override;
  BackendCapabilities capabilities() const override { return {false, true}; }

  const std::string& host() const { return host_; }
  int port() const { return port_; }
  const std::string& path() const { return path_; }

 private:
  struct Impl;
  std::string host_;
  int port_ = 80;
  std::string path_;
  std::chrono::milliseconds timeout_;
  std::unique_ptr<Impl> impl_;
};

BackendPtr remote_backend(const std::string& endpoint, std::chrono::milliseconds timeout);

/// Exact request body the remote backend sends:
/// `{"prompt": [...], "emitted": [...], "allowed": [...]}`.
std::string score_request_body(const ScoreQuery& q);

/// Parses `{"scores": [...]}`; throws MalformedResponseError / LengthMismatchError.
std::vector<double> parse_score_response(std::string_view body, std::size_t expected);

/// Funnels all calls to `inner` through one mutex.
class SerializedBackend final : public ScoringBackend {
 public:
  explicit SerializedBackend(BackendPtr inner) : inner_(std::move(inner)) {}
  std::vector<double> score(const ScoreQuery& q) override;
  BackendCapabilities capabilities() const override;

 private:
  BackendPtr inner_;
  std::mutex mu_;
};

/// Wraps `b` in a SerializedBackend unless it declares concurrent_query_safe.
BackendPtr serialize_if_unsafe(BackendPtr b);

}  // namespace genex
