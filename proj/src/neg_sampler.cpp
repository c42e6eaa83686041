#include "genex/neg_sampler.hpp"

#include <algorithm>
#include <ostream>
#include <random>

namespace genex {

std::uint64_t derive_seed(std::uint64_t global_seed, std::uint64_t index, std::uint64_t stream) {
  return splitmix64(splitmix64(global_seed ^ splitmix64(index)) + stream);
}

std::vector<EventType> sample_negative_types(const std::vector<EventType>& gold,
                                             const std::vector<EventType>& universe, std::size_t n,
                                             std::uint64_t rng_seed) {
  std::vector<EventType> pool;
  for (const auto& t : universe) {
    if (std::find(gold.begin(), gold.end(), t) == gold.end() &&
        std::find(pool.begin(), pool.end(), t) == pool.end()) {
      pool.push_back(t);
    }
  }
  const std::size_t k = std::min(n, pool.size());
  std::mt19937_64 rng(rng_seed);
  // Partial Fisher-Yates; modulo draw keeps the sequence identical across standard libraries.
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng() % (pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

std::vector<TrainingExample> build_training_set(const std::vector<AnnotatedSentence>& corpus,
                                                const EventSchema& schema, const TrainingSetOptions& opts) {
  const auto universe = schema.all_types();
  std::vector<TrainingExample> out;

  for (std::size_t idx = 0; idx < corpus.size(); ++idx) {
    const auto& as = corpus[idx];
    const auto& s = as.sentence;
    const auto gold = gold_event_types(as);

    auto add = [&](Stage stage, Polarity pol, std::optional<EventType> et, std::optional<RoleType> rt, Prompt prompt,
                   ParenList target) {
      out.push_back(TrainingExample{s.id, stage, pol, std::move(et), std::move(rt), std::move(prompt),
                                    std::move(target)});
    };

    ParenList etd_target;
    for (const auto& et : gold) etd_target.items.push_back({et.name});
    add(Stage::kEtd, Polarity::kPositive, std::nullopt, std::nullopt, etd_prompt(s), std::move(etd_target));

    for (const auto& rec : as.records) {
      const auto& roles = schema.roles_of(rec.event_type);
      ParenList trg;
      for (auto sp : rec.triggers) trg.items.push_back(span_tokens(s, sp));
      add(Stage::kTrigger, Polarity::kPositive, rec.event_type, std::nullopt,
          trigger_prompt(rec.event_type, s, opts.sep), std::move(trg));
      for (const auto& role : roles) {
        ParenList arg;
        for (const auto& a : rec.arguments) {
          if (a.role == role) arg.items.push_back(span_tokens(s, a.span));
        }
        add(Stage::kArgument, Polarity::kPositive, rec.event_type, role,
            argument_prompt(rec.event_type, role, s, opts.sep, &schema), std::move(arg));
      }
    }

    for (const auto& et : sample_negative_types(gold, universe, opts.n_trg, derive_seed(opts.seed, idx, 0))) {
      add(Stage::kTrigger, Polarity::kNegative, et, std::nullopt, trigger_prompt(et, s, opts.sep), ParenList{});
    }
    for (const auto& et : sample_negative_types(gold, universe, opts.n_arg, derive_seed(opts.seed, idx, 1))) {
      for (const auto& role : schema.roles_of(et)) {
        add(Stage::kArgument, Polarity::kNegative, et, role, argument_prompt(et, role, s, opts.sep, &schema),
            ParenList{});
      }
    }
  }
  return out;
}

nlohmann::ordered_json to_json(const TrainingExample& ex) {
  nlohmann::ordered_json j;
  j["id"] = ex.sentence_id;
  j["stage"] = stage_name(ex.stage);
  j["polarity"] = ex.polarity == Polarity::kPositive ? "positive" : "negative";
  if (ex.event_type) j["type"] = ex.event_type->name;
  if (ex.role) j["role"] = ex.role->name;
  j["prompt"] = ex.prompt.rendered;
  j["target"] = serialize(ex.target);
  return j;
}

void write_training_set(std::ostream& out, const std::vector<TrainingExample>& examples) {
  for (const auto& ex : examples) out << to_json(ex).dump() << '\n';
}

}  // namespace genex
