#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "genex/backends.hpp"
#include "genex/corpus.hpp"
#include "genex/hash.hpp"
#include "genex/paren_codec.hpp"
#include "genex/prompt_builder.hpp"
#include "genex/schema.hpp"

namespace genex {

enum class Polarity { kPositive, kNegative };

struct TrainingExample {
  std::string sentence_id;
  Stage stage = Stage::kEtd;
  Polarity polarity = Polarity::kPositive;
  std::optional<EventType> event_type;
  std::optional<RoleType> role;
  Prompt prompt;
  ParenList target;
};

/// Seed for sentence `index` on sub-stream `stream`.
std::uint64_t derive_seed(std::uint64_t global_seed, std::uint64_t index, std::uint64_t stream = 0);

/// Picks min(n, |universe \ gold|) distinct types outside `gold`, deterministic in `rng_seed`.
/// The result follows the order of the partial shuffle, not universe order.
std::vector<EventType> sample_negative_types(const std::vector<EventType>& gold,
                                             const std::vector<EventType>& universe, std::size_t n,
                                             std::uint64_t rng_seed);

struct TrainingSetOptions {
  std::size_t n_trg = 4;
  std::size_t n_arg = 2;
  SeparatorToken sep;
  std::uint64_t seed = 0;
};

/// Per sentence: one ETD example; per gold type one positive trigger example and
/// one positive argument example per role; per negative trigger type one `(())`
/// trigger example; per negative argument type one `(())` example per role.
/// Targets are at word granularity.
std::vector<TrainingExample> build_training_set(const std::vector<AnnotatedSentence>& corpus,
                                                const EventSchema& schema,
                                                const TrainingSetOptions& opts = {});

nlohmann::ordered_json to_json(const TrainingExample& ex);
void write_training_set(std::ostream& out, const std::vector<TrainingExample>& examples);

}  // namespace genex
