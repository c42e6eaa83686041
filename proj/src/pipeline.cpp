#include "genex/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <unordered_map>

#include "genex/error.hpp"

namespace genex {

void run_sequential(std::span<Task> tasks) {
  for (auto& t : tasks) t();
}

TaskRunner parallel_runner(std::size_t threads) {
  return [threads](std::span<Task> tasks) {
    const std::size_t n = std::min(std::max<std::size_t>(threads, 1), tasks.size());
    if (n <= 1) {
      run_sequential(tasks);
      return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    workers.reserve(n);
    for (std::size_t w = 0; w < n; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) tasks[i]();
      });
    }
  };
}

void validate(const PipelineConfig& cfg) {
  if (!cfg.trigger || !cfg.argument) throw ValidationError("pipeline needs trigger and argument backends");
  if (!cfg.golden_types && !cfg.etd) throw ValidationError("pipeline needs an ETD backend unless golden types are used");
  if (cfg.beam_size == 0) throw ValidationError("beam_size must be at least 1");
  if (cfg.max_span_len == 0) throw ValidationError("max_span_len must be at least 1");
  if (cfg.max_items == 0) throw ValidationError("max_items must be at least 1");
  if (!cfg.tokenizer) throw ValidationError("pipeline needs a tokenizer");
  if (!cfg.runner) throw ValidationError("pipeline needs a task runner");
  validate_label(cfg.sep.text, "");
}

TokenTrie event_type_trie(const EventSchema& schema, const Tokenizer& tokenizer) {
  TokenTrie trie;
  for (const auto& et : schema.all_types()) trie.insert(tokenizer.tokenize(et.name));
  return trie;
}

TokenTrie sentence_span_trie(const Sentence& s, std::size_t max_span_len, const Tokenizer& tokenizer) {
  TokenTrie trie;
  for (const auto& span : span_candidates(s, max_span_len)) trie.insert(tokenizer.tokenize(join(span)));
  return trie;
}

std::vector<Span> align_items(const Sentence& s, const ParenList& items, std::size_t max_span_len,
                              const Tokenizer& tokenizer) {
  std::unordered_map<std::string, std::vector<Span>> occurrences;
  const auto n = s.tokens.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::string text;
    for (std::size_t len = 1; len <= max_span_len && i + len <= n; ++len) {
      if (len > 1) text += ' ';
      text += s.tokens[i + len - 1];
      occurrences[text].push_back(Span{i, i + len});
    }
  }
  std::unordered_map<std::string, std::size_t> used;
  std::vector<Span> out;
  for (const auto& item : items.items) {
    auto text = tokenizer.detokenize(item);
    auto it = occurrences.find(text);
    if (it == occurrences.end()) throw DecodeError("decoded item '" + text + "' is not a span of the sentence");
    auto k = used[text]++;
    if (k < it->second.size()) out.push_back(it->second[k]);
  }
  return out;
}

namespace {

DecodeOutput decode(ScoringBackend& backend, const TokenSeq& prompt, const TokenTrie& trie,
                    const PipelineConfig& cfg, bool allow_empty) {
  DecodeOptions opts{cfg.max_steps, cfg.max_items, allow_empty};
  if (cfg.beam_size == 1) return decode_greedy(backend, prompt, trie, opts);
  auto beams = decode_beam(backend, prompt, trie, cfg.beam_size, opts);
  if (beams.empty()) throw DecodeError("beam search produced no hypothesis");
  return std::move(beams.front());
}

std::vector<Span> triggers_with_trie(const Sentence& s, const EventType& et, const TokenTrie& trie,
                                     const PipelineConfig& cfg, StageLog* log) {
  auto prompt = trigger_prompt(et, s, cfg.sep);
  auto out = decode(*cfg.trigger, prompt.rendered, trie, cfg, true);
  if (log) *log = StageLog{Stage::kTrigger, et, std::nullopt, render(out.emitted)};
  return align_items(s, out.items, cfg.max_span_len, *cfg.tokenizer);
}

std::vector<Span> arguments_with_trie(const Sentence& s, const EventType& et, const RoleType& rt,
                                      const EventSchema& schema, const TokenTrie& trie, const PipelineConfig& cfg,
                                      StageLog* log) {
  auto prompt = argument_prompt(et, rt, s, cfg.sep, &schema);
  auto out = decode(*cfg.argument, prompt.rendered, trie, cfg, true);
  if (log) *log = StageLog{Stage::kArgument, et, rt, render(out.emitted)};
  return align_items(s, out.items, cfg.max_span_len, *cfg.tokenizer);
}

}  // namespace

std::vector<EventType> detect_event_types(const Sentence& s, const EventSchema& schema, const PipelineConfig& cfg,
                                          StageLog* log) {
  if (!cfg.etd) throw ValidationError("no ETD backend configured");
  auto trie = event_type_trie(schema, *cfg.tokenizer);
  auto out = decode(*cfg.etd, etd_prompt(s).rendered, trie, cfg, cfg.allow_empty_etd);
  if (log) *log = StageLog{Stage::kEtd, std::nullopt, std::nullopt, render(out.emitted)};
  std::vector<EventType> types;
  for (const auto& item : out.items.items) {
    EventType et{cfg.tokenizer->detokenize(item)};
    if (!schema.contains(et)) throw DecodeError("decoded event type '" + et.name + "' is not in the schema");
    if (std::find(types.begin(), types.end(), et) == types.end()) types.push_back(std::move(et));
  }
  return types;
}

std::vector<Span> extract_triggers(const Sentence& s, const EventType& et, const PipelineConfig& cfg, StageLog* log) {
  return triggers_with_trie(s, et, sentence_span_trie(s, cfg.max_span_len, *cfg.tokenizer), cfg, log);
}

std::vector<Span> extract_arguments(const Sentence& s, const EventType& et, const RoleType& rt,
                                    const EventSchema& schema, const PipelineConfig& cfg, StageLog* log) {
  if (!schema.has_role(et, rt)) throw RoleMismatchError("'" + rt.name + "' is not a role of '" + et.name + "'");
  return arguments_with_trie(s, et, rt, schema, sentence_span_trie(s, cfg.max_span_len, *cfg.tokenizer), cfg, log);
}

PipelineResult run_pipeline(const Sentence& s, const EventSchema& schema, const PipelineConfig& cfg,
                            const std::vector<EventType>* gold_types) {
  validate(cfg);
  PipelineResult result;
  auto& trace = result.trace;

  std::vector<EventType> types;
  if (cfg.golden_types) {
    if (gold_types == nullptr) throw ValidationError("golden-type mode needs gold event types");
    for (const auto& et : *gold_types) {
      if (!schema.contains(et)) throw UnknownEventTypeError("unknown event type '" + et.name + "'");
      if (std::find(types.begin(), types.end(), et) == types.end()) types.push_back(et);
    }
  } else {
    StageLog log;
    try {
      types = detect_event_types(s, schema, cfg, &log);
    } catch (const std::exception& e) {
      throw StageError(Stage::kEtd, e.what());
    }
    trace.decode_logs.push_back(std::move(log));
  }

  const auto trie = sentence_span_trie(s, cfg.max_span_len, *cfg.tokenizer);

  // One slot per task; tasks only write their own slot.
  struct Slot {
    Stage stage;
    std::size_t type_index;
    std::optional<RoleType> role;
    std::vector<Span> spans;
    StageLog log;
    std::exception_ptr error;
  };
  std::vector<Slot> slots;
  for (std::size_t i = 0; i < types.size(); ++i) {
    slots.push_back(Slot{Stage::kTrigger, i, std::nullopt, {}, {}, nullptr});
    for (const auto& role : schema.roles_of(types[i])) slots.push_back(Slot{Stage::kArgument, i, role, {}, {}, nullptr});
  }

  std::vector<Task> tasks;
  tasks.reserve(slots.size());
  for (auto& slot : slots) {
    tasks.emplace_back([&slot, &s, &schema, &cfg, &trie, &types] {
      try {
        const auto& et = types[slot.type_index];
        slot.spans = slot.stage == Stage::kTrigger
                         ? triggers_with_trie(s, et, trie, cfg, &slot.log)
                         : arguments_with_trie(s, et, *slot.role, schema, trie, cfg, &slot.log);
      } catch (...) {
        slot.error = std::current_exception();
      }
    });
  }
  cfg.runner(tasks);

  for (auto& slot : slots) {
    if (!slot.error) continue;
    try {
      std::rethrow_exception(slot.error);
    } catch (const std::exception& e) {
      throw StageError(slot.stage, e.what());
    }
  }

  trace.x = types.size();
  for (const auto& et : types) result.records.push_back(EventRecord{et, {}, {}});
  for (auto& slot : slots) {
    auto& rec = result.records[slot.type_index];
    if (slot.stage == Stage::kTrigger) {
      rec.triggers = slot.spans;
    } else {
      for (auto sp : slot.spans) rec.arguments.push_back(Argument{*slot.role, sp});
    }
    trace.decode_logs.push_back(std::move(slot.log));
  }
  for (auto& rec : result.records) {
    canonicalize(rec, &schema);
    trace.y_per_type[rec.event_type] = rec.triggers.size();
    for (const auto& role : schema.roles_of(rec.event_type)) trace.z_per_type_role[{rec.event_type, role}] = 0;
    for (const auto& a : rec.arguments) ++trace.z_per_type_role[{rec.event_type, a.role}];
  }
  return result;
}

std::vector<SentenceResult> run_corpus(const std::vector<AnnotatedSentence>& corpus, const EventSchema& schema,
                                       const PipelineConfig& cfg, std::size_t jobs) {
  PipelineConfig local = cfg;
  local.etd = serialize_if_unsafe(local.etd);
  local.trigger = serialize_if_unsafe(local.trigger);
  local.argument = serialize_if_unsafe(local.argument);
  validate(local);

  std::vector<SentenceResult> results(corpus.size());
  std::vector<Task> tasks;
  tasks.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    tasks.emplace_back([&, i] {
      const auto& as = corpus[i];
      auto& r = results[i];
      r.id = as.sentence.id;
      try {
        auto gold = gold_event_types(as);
        r.result = run_pipeline(as.sentence, schema, local, local.golden_types ? &gold : nullptr);
      } catch (const std::exception& e) {
        r.error = e.what();
      }
    });
  }
  parallel_runner(jobs)(tasks);
  return results;
}

nlohmann::ordered_json trace_to_json(const PipelineTrace& t) {
  nlohmann::ordered_json j;
  j["x"] = t.x;
  j["y"] = nlohmann::ordered_json::object();
  for (const auto& [et, n] : t.y_per_type) j["y"][et.name] = n;
  j["z"] = nlohmann::ordered_json::object();
  for (const auto& [key, n] : t.z_per_type_role) j["z"][key.first.name][key.second.name] = n;
  return j;
}

nlohmann::ordered_json to_json(const SentenceResult& r, const Sentence& s) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["tokens"] = s.tokens;
  if (!r.ok()) {
    j["error"] = r.error;
    return j;
  }
  j["records"] = records_to_json(r.result->records);
  j["trace"] = trace_to_json(r.result->trace);
  return j;
}

}  // namespace genex
