#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "genex/corpus.hpp"
#include "genex/schema.hpp"

namespace genex {

struct MatchCounts {
  std::size_t correct = 0;
  std::size_t predicted = 0;
  std::size_t gold = 0;
  bool operator==(const MatchCounts&) const = default;
};

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  MatchCounts counts;
};

struct TriggerMention {
  std::string sentence_id;
  EventType event_type;
  Span span;
  auto operator<=>(const TriggerMention&) const = default;
};

struct ArgumentMention {
  std::string sentence_id;
  EventType event_type;
  RoleType role;
  Span span;
  auto operator<=>(const ArgumentMention&) const = default;
};

double f1(double p, double r);

/// P = correct/predicted and R = correct/gold, with P = R = 1 when both are empty
/// and 0 for the empty side otherwise.
Metrics metrics_from_counts(MatchCounts c);

Metrics score_triggers(const std::vector<TriggerMention>& pred, const std::vector<TriggerMention>& gold);
Metrics score_arguments(const std::vector<ArgumentMention>& pred,
                        const std::vector<ArgumentMention>& gold);

void collect_mentions(const std::string& sentence_id, const std::vector<EventRecord>& records,
                      std::vector<TriggerMention>& triggers, std::vector<ArgumentMention>& arguments);

struct ScoreReport {
  Metrics trigger;
  Metrics argument;
};

nlohmann::ordered_json to_json(const ScoreReport& r);

}  // namespace genex
