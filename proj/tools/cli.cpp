#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "genex/backends.hpp"
#include "genex/corpus.hpp"
#include "genex/error.hpp"
#include "genex/neg_sampler.hpp"
#include "genex/pipeline.hpp"
#include "genex/scorer.hpp"

namespace genex::cli {

namespace {

struct RunConfig {
  std::string schema_path;
  std::string corpus_path;
  std::string out_path;
  std::string pred_path;
  std::string gold_path;
  std::string vocab_path;
  std::string backend_etd = "oracle";
  std::string backend_trg = "oracle";
  std::string backend_arg = "oracle";
  std::string sep{kDefaultSeparator};
  std::size_t n_trg = 4;
  std::size_t n_arg = 2;
  std::size_t max_span_len = 8;
  std::size_t beam = 1;
  std::size_t max_steps = 0;
  bool golden_types = false;
  std::uint64_t seed = 0;
  std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
  double remote_timeout = 10.0;
};

// Configuration problems map to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Inputs {
  EventSchema schema;
  std::vector<AnnotatedSentence> corpus;
  std::shared_ptr<const Tokenizer> tokenizer;
};

Inputs load_inputs(const RunConfig& cfg) {
  if (cfg.schema_path.empty()) throw UsageError("--schema is required");
  if (cfg.corpus_path.empty()) throw UsageError("--corpus is required");
  Inputs in;
  try {
    in.schema = load_schema_file(cfg.schema_path, cfg.sep);
    in.corpus = load_corpus_file(cfg.corpus_path, &in.schema, cfg.sep);
    if (cfg.vocab_path.empty()) {
      in.tokenizer = std::make_shared<WhitespaceTokenizer>();
    } else {
      in.tokenizer = std::make_shared<SubwordTokenizer>(load_subword_vocab_file(cfg.vocab_path));
    }
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return in;
}

BackendPtr make_backend(const std::string& spec, Stage stage, const RunConfig& cfg, const Inputs& in) {
  auto colon = spec.find(':');
  std::string kind = spec.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "oracle") return oracle_from_corpus(in.corpus, in.schema, stage, cfg.sep, *in.tokenizer);
  if (kind == "uniform") return std::make_shared<UniformBackend>();
  if (kind == "fuzz") {
    try {
      std::size_t used = 0;
      auto seed = std::stoull(arg, &used);
      if (used != arg.size()) throw std::invalid_argument(arg);
      return fuzz_backend(seed);
    } catch (const std::exception&) {
      throw UsageError("bad fuzz seed in backend spec '" + spec + "'");
    }
  }
  if (kind == "remote") {
    std::string url = arg;
    if (const char* env = std::getenv("GENEX_REMOTE_URL"); env != nullptr && *env != '\0') url = env;
    if (url.empty()) throw UsageError("backend 'remote' needs a URL or GENEX_REMOTE_URL");
    try {
      return remote_backend(url, std::chrono::milliseconds(static_cast<long long>(cfg.remote_timeout * 1000.0)));
    } catch (const ValidationError& e) {
      throw UsageError(e.what());
    }
  }
  throw UsageError("unknown backend spec '" + spec + "' (expected oracle, uniform, fuzz:<seed>, remote:<url>)");
}

PipelineConfig pipeline_config(const RunConfig& cfg, const Inputs& in, bool need_etd) {
  PipelineConfig pc;
  pc.sep = SeparatorToken{cfg.sep};
  pc.max_span_len = cfg.max_span_len;
  pc.beam_size = cfg.beam;
  pc.max_steps = cfg.max_steps;
  pc.golden_types = cfg.golden_types;
  pc.tokenizer = in.tokenizer;
  if (need_etd && !cfg.golden_types) pc.etd = make_backend(cfg.backend_etd, Stage::kEtd, cfg, in);
  pc.trigger = make_backend(cfg.backend_trg, Stage::kTrigger, cfg, in);
  pc.argument = make_backend(cfg.backend_arg, Stage::kArgument, cfg, in);
  try {
    validate(pc);
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  }
  return pc;
}

// Writes to --out when given, else to `out`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw UsageError("cannot open output file '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

int cmd_detect(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  auto in = load_inputs(cfg);
  PipelineConfig pc;
  pc.sep = SeparatorToken{cfg.sep};
  pc.beam_size = cfg.beam;
  pc.max_steps = cfg.max_steps;
  pc.tokenizer = in.tokenizer;
  pc.etd = serialize_if_unsafe(make_backend(cfg.backend_etd, Stage::kEtd, cfg, in));

  std::vector<nlohmann::ordered_json> lines(in.corpus.size());
  std::vector<Task> tasks;
  std::size_t failures = 0;
  std::mutex mu;
  for (std::size_t i = 0; i < in.corpus.size(); ++i) {
    tasks.emplace_back([&, i] {
      const auto& s = in.corpus[i].sentence;
      auto& j = lines[i];
      j["id"] = s.id;
      try {
        auto types = detect_event_types(s, in.schema, pc);
        j["types"] = nlohmann::ordered_json::array();
        for (const auto& t : types) j["types"].push_back(t.name);
      } catch (const std::exception& e) {
        j["error"] = std::string("ETD: ") + e.what();
        std::lock_guard lock(mu);
        ++failures;
      }
    });
  }
  parallel_runner(cfg.jobs)(tasks);

  Sink sink(cfg.out_path, out);
  for (const auto& j : lines) sink.get() << j.dump() << '\n';
  if (failures > 0) {
    err << "detect: " << failures << " of " << lines.size() << " sentences failed\n";
    return kPartialFailure;
  }
  return kOk;
}

int cmd_pipeline(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  auto in = load_inputs(cfg);
  auto pc = pipeline_config(cfg, in, true);
  auto results = run_corpus(in.corpus, in.schema, pc, cfg.jobs);

  Sink sink(cfg.out_path, out);
  std::size_t failures = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i].ok()) {
      ++failures;
      err << "pipeline: sentence '" << results[i].id << "': " << results[i].error << '\n';
    }
    sink.get() << to_json(results[i], in.corpus[i].sentence).dump() << '\n';
  }
  return failures > 0 ? kPartialFailure : kOk;
}

// Prediction lines carrying "error" count as sentences with no predictions.
std::vector<std::pair<std::string, std::vector<EventRecord>>> load_predictions(const std::string& path,
                                                                               const std::string& sep) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open prediction file '" + path + "'");
  std::vector<std::pair<std::string, std::vector<EventRecord>>> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("id") || !j["id"].is_string()) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": malformed prediction line");
    }
    if (j.contains("error")) {
      out.emplace_back(j["id"].get<std::string>(), std::vector<EventRecord>{});
      continue;
    }
    try {
      auto as = parse_annotated_sentence(j, nullptr, sep);
      out.emplace_back(as.sentence.id, std::move(as.records));
    } catch (const Error& e) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

int cmd_score(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  if (cfg.pred_path.empty() || cfg.gold_path.empty()) throw UsageError("score needs --pred and --gold");
  auto pred = load_predictions(cfg.pred_path, cfg.sep);
  std::vector<AnnotatedSentence> gold;
  try {
    gold = load_corpus_file(cfg.gold_path, nullptr, cfg.sep);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }

  std::set<std::string> pred_ids, gold_ids;
  for (const auto& [id, recs] : pred) {
    if (!pred_ids.insert(id).second) throw UsageError("duplicate sentence id '" + id + "' in predictions");
  }
  for (const auto& as : gold) {
    if (!gold_ids.insert(as.sentence.id).second) throw UsageError("duplicate sentence id '" + as.sentence.id + "' in gold");
  }
  if (pred_ids != gold_ids) throw UsageError("prediction and gold files cover different sentence ids");

  std::vector<TriggerMention> pt, gt;
  std::vector<ArgumentMention> pa, ga;
  for (const auto& [id, recs] : pred) collect_mentions(id, recs, pt, pa);
  for (const auto& as : gold) collect_mentions(as.sentence.id, as.records, gt, ga);
  ScoreReport report{score_triggers(pt, gt), score_arguments(pa, ga)};
  auto text = to_json(report).dump(2);
  out << text << '\n';
  if (!cfg.out_path.empty()) {
    Sink sink(cfg.out_path, out);
    sink.get() << text << '\n';
  }
  return kOk;
}

int cmd_make_training_set(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  auto in = load_inputs(cfg);
  TrainingSetOptions opts{cfg.n_trg, cfg.n_arg, SeparatorToken{cfg.sep}, cfg.seed};
  auto examples = build_training_set(in.corpus, in.schema, opts);
  Sink sink(cfg.out_path, out);
  write_training_set(sink.get(), examples);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Disentangled generative event extraction with constrained decoding", "genex"};
  app.set_config("--config", "", "key = value configuration file; flags override it");
  app.require_subcommand(1);

  app.add_option("--schema", cfg.schema_path, "Event schema file");
  app.add_option("--corpus", cfg.corpus_path, "Annotated corpus (JSONL)");
  app.add_option("--out", cfg.out_path, "Output file (default: stdout)");
  app.add_option("--backend-etd", cfg.backend_etd, "oracle | uniform | fuzz:<seed> | remote[:<url>]");
  app.add_option("--backend-trg", cfg.backend_trg, "Trigger-stage backend");
  app.add_option("--backend-arg", cfg.backend_arg, "Argument-stage backend");
  app.add_option("--sep", cfg.sep, "Prompt separator token");
  app.add_option("--n-trg", cfg.n_trg, "Negative event types per sentence for trigger examples");
  app.add_option("--n-arg", cfg.n_arg, "Negative event types per sentence for argument examples");
  app.add_option("--beam", cfg.beam, "Beam size (1 = greedy)")->check(CLI::PositiveNumber);
  app.add_option("--max-span-len", cfg.max_span_len, "Longest candidate span in words")->check(CLI::PositiveNumber);
  app.add_option("--max-steps", cfg.max_steps, "Decode step limit (0 = derived from the trie)");
  app.add_flag("--golden-types", cfg.golden_types, "Use gold event types instead of type detection");
  app.add_option("--seed", cfg.seed, "Negative sampling seed");
  app.add_option("--jobs", cfg.jobs, "Worker threads across sentences")->check(CLI::PositiveNumber);
  app.add_option("--vocab", cfg.vocab_path, "Subword vocabulary for backend tokenization");
  app.add_option("--remote-timeout", cfg.remote_timeout, "Remote backend timeout in seconds")->check(CLI::PositiveNumber);

  auto* detect = app.add_subcommand("detect", "Detect event types per sentence");
  auto* pipeline = app.add_subcommand("pipeline", "Run type detection, trigger and argument extraction");
  auto* score = app.add_subcommand("score", "Score predictions against gold");
  score->add_option("--pred", cfg.pred_path, "Prediction JSONL");
  score->add_option("--gold", cfg.gold_path, "Gold corpus JSONL");
  auto* training = app.add_subcommand("make-training-set", "Write training examples with negative samples");
  for (auto* sub : {detect, pipeline, score, training}) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "genex: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (detect->parsed()) return cmd_detect(cfg, out, err);
    if (pipeline->parsed()) return cmd_pipeline(cfg, out, err);
    if (score->parsed()) return cmd_score(cfg, out, err);
    return cmd_make_training_set(cfg, out, err);
  } catch (const UsageError& e) {
    err << "genex: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "genex: " << e.what() << '\n';
    return kPartialFailure;
  }
}

}  // namespace genex::cli
