#include "genex/scorer.hpp"

#include <map>

namespace genex {

double f1(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

Metrics metrics_from_counts(MatchCounts c) {
  Metrics m;
  m.counts = c;
  m.precision = c.predicted > 0 ? static_cast<double>(c.correct) / static_cast<double>(c.predicted)
                                : (c.gold == 0 ? 1.0 : 0.0);
  m.recall = c.gold > 0 ? static_cast<double>(c.correct) / static_cast<double>(c.gold)
                        : (c.predicted == 0 ? 1.0 : 0.0);
  m.f1 = f1(m.precision, m.recall);
  return m;
}

namespace {

// One-to-one matching: each gold mention can be consumed once, so the number of
// matches for a key is the smaller of its two multiplicities.
template <class Mention>
Metrics match(const std::vector<Mention>& pred, const std::vector<Mention>& gold) {
  std::map<Mention, std::size_t> available;
  for (const auto& g : gold) ++available[g];
  MatchCounts c{0, pred.size(), gold.size()};
  for (const auto& p : pred) {
    auto it = available.find(p);
    if (it != available.end() && it->second > 0) {
      --it->second;
      ++c.correct;
    }
  }
  return metrics_from_counts(c);
}

}  // namespace

Metrics score_triggers(const std::vector<TriggerMention>& pred, const std::vector<TriggerMention>& gold) {
  return match(pred, gold);
}

Metrics score_arguments(const std::vector<ArgumentMention>& pred, const std::vector<ArgumentMention>& gold) {
  return match(pred, gold);
}

void collect_mentions(const std::string& sentence_id, const std::vector<EventRecord>& records,
                      std::vector<TriggerMention>& triggers, std::vector<ArgumentMention>& arguments) {
  for (const auto& r : records) {
    for (auto sp : r.triggers) triggers.push_back({sentence_id, r.event_type, sp});
    for (const auto& a : r.arguments) arguments.push_back({sentence_id, r.event_type, a.role, a.span});
  }
}

nlohmann::ordered_json to_json(const ScoreReport& r) {
  auto prf = [](const Metrics& m) {
    nlohmann::ordered_json j;
    j["p"] = m.precision;
    j["r"] = m.recall;
    j["f1"] = m.f1;
    return j;
  };
  auto counts = [](const MatchCounts& c) {
    nlohmann::ordered_json j;
    j["correct"] = c.correct;
    j["predicted"] = c.predicted;
    j["gold"] = c.gold;
    return j;
  };
  nlohmann::ordered_json j;
  j["trigger"] = prf(r.trigger);
  j["argument"] = prf(r.argument);
  j["counts"]["trigger"] = counts(r.trigger.counts);
  j["counts"]["argument"] = counts(r.argument.counts);
  return j;
}

}  // namespace genex
