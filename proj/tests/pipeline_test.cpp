#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "genex/error.hpp"
#include "genex/pipeline.hpp"
#include "test_support.hpp"

using namespace genex;
using genex::testing::ace_schema;
using genex::testing::by_id;
using genex::testing::desk_corpus;

namespace {

PipelineConfig oracle_config(const std::vector<AnnotatedSentence>& corpus, const EventSchema& schema) {
  PipelineConfig cfg;
  cfg.etd = oracle_from_corpus(corpus, schema, Stage::kEtd);
  cfg.trigger = oracle_from_corpus(corpus, schema, Stage::kTrigger);
  cfg.argument = oracle_from_corpus(corpus, schema, Stage::kArgument);
  return cfg;
}

class ThrowOn final : public ScoringBackend {
 public:
  ThrowOn(BackendPtr inner, Token poison) : inner_(std::move(inner)), poison_(std::move(poison)) {}
  std::vector<double> score(const ScoreQuery& q) override {
    if (std::find(q.prompt.begin(), q.prompt.end(), poison_) != q.prompt.end()) throw BackendError("poisoned");
    return inner_->score(q);
  }
  BackendCapabilities capabilities() const override { return {}; }

 private:
  BackendPtr inner_;
  Token poison_;
};

TaskRunner shuffled_runner(std::uint64_t seed) {
  return [seed](std::span<Task> tasks) {
    std::vector<std::size_t> order(tasks.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    for (auto i : order) tasks[i]();
  };
}

}  // namespace

TEST_CASE("stage functions on the running example") {
  auto schema = ace_schema();
  auto corpus = desk_corpus(schema);
  auto cfg = oracle_config(corpus, schema);
  const auto& s = by_id(corpus, "fig1").sentence;

  StageLog log;
  auto types = detect_event_types(s, schema, cfg, &log);
  // gold order in the file: CONVICT then ATTACK
  CHECK(types == std::vector<EventType>{{"CONVICT"}, {"ATTACK"}});
  CHECK(log.emitted == "((CONVICT)(ATTACK))");

  CHECK(extract_triggers(s, {"CONVICT"}, cfg) == std::vector<Span>{{5, 6}});
  CHECK(extract_triggers(s, {"ATTACK"}, cfg) == std::vector<Span>{{7, 8}});
  CHECK(extract_arguments(s, {"ATTACK"}, {"target"}, schema, cfg, &log) == std::vector<Span>{{8, 10}});
  CHECK(log.emitted == "((restaurant workers))");
  CHECK(extract_arguments(s, {"ATTACK"}, {"victim"}, schema, cfg).empty());
  CHECK_THROWS_AS(extract_arguments(s, {"CONVICT"}, {"target"}, schema, cfg), RoleMismatchError);
}

TEST_CASE("oracle pipeline reproduces every gold record") {
  auto schema = ace_schema();
  auto corpus = desk_corpus(schema);
  auto cfg = oracle_config(corpus, schema);
  for (const auto& as : corpus) {
    auto res = run_pipeline(as.sentence, schema, cfg);
    auto gold = as.records;
    for (auto& r : gold) canonicalize(r, &schema);
    CHECK_MESSAGE(res.records == gold, as.sentence.id);
  }
}

TEST_CASE("trace counts agree with the records") {
  auto schema = ace_schema();
  auto corpus = desk_corpus(schema);
  auto cfg = oracle_config(corpus, schema);
  auto res = run_pipeline(by_id(corpus, "fig1").sentence, schema, cfg);
  const auto& t = res.trace;
  CHECK(t.x == 2);
  CHECK(t.y_per_type.at({"CONVICT"}) == 1);
  CHECK(t.y_per_type.at({"ATTACK"}) == 1);
  CHECK(t.z_per_type_role.at({{"ATTACK"}, {"target"}}) == 1);
  CHECK(t.z_per_type_role.at({{"ATTACK"}, {"victim"}}) == 0);
  CHECK(t.z_per_type_role.size() == 6);
  // one ETD log plus one per trigger/argument task
  CHECK(t.decode_logs.size() == 1 + 2 + 6);
  auto j = trace_to_json(t);
  CHECK(j.dump() ==
        R"({"x":2,"y":{"ATTACK":1,"CONVICT":1},"z":{"ATTACK":{"attacker":1,"place":1,"target":1,"victim":0},"CONVICT":{"defendant":1,"place":1}}})");

  auto empty = run_pipeline(by_id(corpus, "no-event").sentence, schema, cfg);
  CHECK(empty.records.empty());
  CHECK(empty.trace.x == 0);
  CHECK(empty.trace.decode_logs.size() == 1);
  CHECK(empty.trace.decode_logs[0].emitted == "(())");
}

TEST_CASE("duplicate detected types collapse") {
  auto schema = ace_schema();
  auto corpus = desk_corpus(schema);
  auto cfg = oracle_config(corpus, schema);
  cfg.etd = oracle_from_gold({{{"CONVICT"}, {"CONVICT"}}});
  const auto& s = by_id(corpus, "fig1").sentence;
  CHECK(detect_event_types(s, schema, cfg) == std::vector<EventType>{{"CONVICT"}});
  auto res = run_pipeline(s, schema, cfg);
  REQUIRE(res.records.size() == 1);
  CHECK(res.trace.x == 1);
}

TEST_CASE("spurious detected type yields an empty record") {
  auto schema = ace_schema();
  auto corpus = desk_corpus(schema);
  auto cfg = oracle_config(corpus, schema);
  cfg.etd = oracle_from_gold({{{"DIE"}}});
  auto res = run_pipeline(by_id(corpus, "fig1").sentence, schema, cfg);
  REQUIRE(res.records.size() == 1);
  CHECK(res.records[0].event_type == EventType{"DIE"});
  CHECK(res.records[0].triggers.empty());
  CHECK(res.records[0].arguments.empty());
  CHECK(res.trace.y_per_type.at({"DIE"}) == 0);
}

TEST_CASE("golden types bypass detection") {
  auto schema = ace_schema();
  auto corpus = desk_corpus(schema);
  auto cfg = oracle_config(corpus, schema);
  cfg.etd = nullptr;
  cfg.golden_types = true;
  const auto& as = by_id(corpus, "fig1");
  auto gold = gold_event_types(as);
  auto res = run_pipeline(as.sentence, schema, cfg, &gold);
  CHECK(res.records.size() == 2);
  CHECK(res.trace.decode_logs.size() == 8);
  CHECK_THROWS_AS(run_pipeline(as.sentence, schema, cfg), ValidationError);
  std::vector<EventType> bogus{{"NOPE"}};
  CHECK_THROWS_AS(run_pipeline(as.sentence, schema, cfg, &bogus), UnknownEventTypeError);
}

TEST_CASE("config validation") {
  PipelineConfig cfg;
  CHECK_THROWS_AS(validate(cfg), ValidationError);
  cfg.etd = cfg.trigger = cfg.argument = std::make_shared<UniformBackend>();
  CHECK_NOTHROW(validate(cfg));
  cfg.beam_size = 0;
  CHECK_THROWS_AS(validate(cfg), ValidationError);
}

TEST_CASE("alignment takes leftmost occurrences in order") {
  Sentence s{"d", {"the", "man", "saw", "the", "man"}};
  WhitespaceTokenizer ws;
  CHECK(align_items(s, {{{"the", "man"}}}, 4, ws) == std::vector<Span>{{0, 2}});
  CHECK(align_items(s, {{{"the", "man"}, {"the", "man"}}}, 4, ws) == std::vector<Span>{{0, 2}, {3, 5}});
  // a third copy has nowhere to go
  CHECK(align_items(s, {{{"man"}, {"man"}, {"man"}}}, 4, ws) == std::vector<Span>{{1, 2}, {4, 5}});
  CHECK_THROWS_AS(align_items(s, {{{"woman"}}}, 4, ws), DecodeError);
}

TEST_CASE("stage errors carry the failing stage") {
  auto schema = ace_schema();
  auto corpus = desk_corpus(schema);
  auto cfg = oracle_config(corpus, schema);
  const auto& s = by_id(corpus, "fig1").sentence;

  auto etd_fail = cfg;
  etd_fail.etd = std::make_shared<ThrowOn>(cfg.etd, "Toefting");
  try {
    run_pipeline(s, schema, etd_fail);
    FAIL("expected StageError");
  } catch (const StageError& e) {
    CHECK(e.stage() == Stage::kEtd);
  }

  auto arg_fail = cfg;
  arg_fail.argument = std::make_shared<ThrowOn>(cfg.argument, "victim");
  try {
    run_pipeline(s, schema, arg_fail);
    FAIL("expected StageError");
  } catch (const StageError& e) {
    CHECK(e.stage() == Stage::kArgument);
    CHECK(std::string(e.what()).find("poisoned") != std::string::npos);
  }
}

TEST_CASE("run_corpus isolates per-sentence failures") {
  auto schema = ace_schema();
  auto corpus = desk_corpus(schema);
  auto cfg = oracle_config(corpus, schema);
  cfg.trigger = std::make_shared<ThrowOn>(cfg.trigger, "Shah");
  auto results = run_corpus(corpus, schema, cfg, 3);
  REQUIRE(results.size() == corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    CHECK(results[i].id == corpus[i].sentence.id);
    CHECK(results[i].ok() == (corpus[i].sentence.id != "shah"));
  }
  const auto& bad = results[1];
  CHECK(bad.error.rfind("TRIGGER: ", 0) == 0);
  CHECK(to_json(bad, corpus[1].sentence).dump() ==
        R"({"id":"shah","tokens":["We","put","the","Shah","of","Iran","in","power","."],"error":")" + bad.error +
            R"("})");

  CHECK(run_corpus({}, schema, cfg, 4).empty());
}

TEST_CASE("scheduling does not change results") {
  auto schema = ace_schema();
  auto corpus = desk_corpus(schema);
  auto cfg = oracle_config(corpus, schema);
  cfg.trigger = fuzz_backend(7);
  cfg.argument = fuzz_backend(8);
  auto reference = run_corpus(corpus, schema, cfg, 1);

  auto dump = [&](const std::vector<SentenceResult>& rs) {
    std::string out;
    for (std::size_t i = 0; i < rs.size(); ++i) out += to_json(rs[i], corpus[i].sentence).dump() + "\n";
    return out;
  };
  const auto ref = dump(reference);
  CHECK(dump(run_corpus(corpus, schema, cfg, 4)) == ref);

  auto threaded = cfg;
  threaded.runner = parallel_runner(4);
  CHECK(dump(run_corpus(corpus, schema, threaded, 2)) == ref);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto shuffled = cfg;
    shuffled.runner = shuffled_runner(seed);
    CHECK(dump(run_corpus(corpus, schema, shuffled, 1)) == ref);
  }
}
