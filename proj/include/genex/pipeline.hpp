#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "genex/backends.hpp"
#include "genex/constrained_decoder.hpp"
#include "genex/corpus.hpp"
#include "genex/error.hpp"
#include "genex/prompt_builder.hpp"
#include "genex/schema.hpp"
#include "genex/tokenizer.hpp"

namespace genex {

using Task = std::function<void()>;
/// Executes every task exactly once, in any order or concurrently.
using TaskRunner = std::function<void(std::span<Task>)>;

void run_sequential(std::span<Task> tasks);
/// Runs tasks on up to `threads` worker threads.
TaskRunner parallel_runner(std::size_t threads);

struct PipelineConfig {
  SeparatorToken sep;
  std::size_t max_span_len = 8;
  std::size_t beam_size = 1;
  /// 0 selects the per-trie default.
  std::size_t max_steps = 0;
  std::size_t max_items = 8;
  bool allow_empty_etd = true;
  /// Skip type detection and use the gold types supplied to run_pipeline.
  bool golden_types = false;
  BackendPtr etd;
  BackendPtr trigger;
  BackendPtr argument;
  std::shared_ptr<const Tokenizer> tokenizer = std::make_shared<WhitespaceTokenizer>();
  TaskRunner runner = run_sequential;
};

/// Throws ValidationError on a missing backend or a zero beam/span length.
void validate(const PipelineConfig& cfg);

struct StageLog {
  Stage stage = Stage::kEtd;
  std::optional<EventType> event_type;
  std::optional<RoleType> role;
  std::string emitted;
  bool operator==(const StageLog&) const = default;
};

/// Per-sentence counts: x detected types, y triggers per type, z arguments per (type, role).
struct PipelineTrace {
  std::size_t x = 0;
  std::map<EventType, std::size_t> y_per_type;
  std::map<std::pair<EventType, RoleType>, std::size_t> z_per_type_role;
  std::vector<StageLog> decode_logs;
  bool operator==(const PipelineTrace&) const = default;
};

/// Error raised by a pipeline stage, tagged with the stage that failed.
class StageError : public Error {
 public:
  StageError(Stage stage, const std::string& what)
      : Error(std::string(stage_name(stage)) + ": " + what), stage_(stage) {}
  Stage stage() const { return stage_; }

 private:
  Stage stage_;
};

/// Trie over the tokenized names of every schema type.
TokenTrie event_type_trie(const EventSchema& schema, const Tokenizer& tokenizer);
/// Trie over the tokenized contiguous spans of `s` up to max_span_len words.
TokenTrie sentence_span_trie(const Sentence& s, std::size_t max_span_len, const Tokenizer& tokenizer);

/// Maps decoded items to spans: the k-th copy of a phrase takes the k-th leftmost
/// occurrence; copies beyond the occurrence count are dropped.
std::vector<Span> align_items(const Sentence& s, const ParenList& items, std::size_t max_span_len,
                              const Tokenizer& tokenizer);

std::vector<EventType> detect_event_types(const Sentence& s, const EventSchema& schema,
                                          const PipelineConfig& cfg, StageLog* log = nullptr);
std::vector<Span> extract_triggers(const Sentence& s, const EventType& et, const PipelineConfig& cfg,
                                   StageLog* log = nullptr);
/// Throws RoleMismatchError unless rt is a role of et.
std::vector<Span> extract_arguments(const Sentence& s, const EventType& et, const RoleType& rt,
                                    const EventSchema& schema, const PipelineConfig& cfg,
                                    StageLog* log = nullptr);

struct PipelineResult {
  std::vector<EventRecord> records;
  PipelineTrace trace;
};

/// Type detection, then mutually independent trigger and per-role argument tasks
/// run through cfg.runner. `gold_types` is required in golden-type mode.
PipelineResult run_pipeline(const Sentence& s, const EventSchema& schema, const PipelineConfig& cfg,
                            const std::vector<EventType>* gold_types = nullptr);

struct SentenceResult {
  std::string id;
  std::optional<PipelineResult> result;
  std::string error;  // set when result is empty
  bool ok() const { return result.has_value(); }
};

/// Per-sentence errors are collected, not propagated. Output order is input order.
std::vector<SentenceResult> run_corpus(const std::vector<AnnotatedSentence>& corpus,
                                       const EventSchema& schema, const PipelineConfig& cfg,
                                       std::size_t jobs = 1);

nlohmann::ordered_json trace_to_json(const PipelineTrace& t);
/// Prediction line: the corpus line format plus "trace", or {"id", "error"}.
nlohmann::ordered_json to_json(const SentenceResult& r, const Sentence& s);

}  // namespace genex
