#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "genex/schema.hpp"
#include "genex/tokens.hpp"

namespace genex {

struct Sentence {
  std::string id;
  TokenSeq tokens;
  bool operator==(const Sentence&) const = default;
};

/// Half-open token range [start, end).
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t length() const { return end - start; }
  auto operator<=>(const Span&) const = default;
};

struct Argument {
  RoleType role;
  Span span;
  auto operator<=>(const Argument&) const = default;
};

struct EventRecord {
  EventType event_type;
  std::vector<Span> triggers;
  std::vector<Argument> arguments;
  bool operator==(const EventRecord&) const = default;
};

struct AnnotatedSentence {
  Sentence sentence;
  std::vector<EventRecord> records;
  bool operator==(const AnnotatedSentence&) const = default;
};

/// Tokens covered by `span`.
TokenSeq span_tokens(const Sentence& s, Span span);

/// Validates `s`; throws ValidationError on an empty token list or an illegal token.
void validate_sentence(const Sentence& s, std::string_view sep = kDefaultSeparator);

/// Sorts triggers by span and arguments by (schema role order, span), dropping exact
/// duplicates. Without a schema, arguments keep their relative role order of first appearance.
void canonicalize(EventRecord& rec, const EventSchema* schema = nullptr);

/// One JSONL line -> AnnotatedSentence. Same-type records are merged.
AnnotatedSentence parse_annotated_sentence(const nlohmann::json& j, const EventSchema* schema,
                                           std::string_view sep = kDefaultSeparator);
nlohmann::ordered_json to_json(const AnnotatedSentence& as);
nlohmann::ordered_json records_to_json(const std::vector<EventRecord>& records);

/// Reads the JSONL corpus format. When `schema` is given, event types and roles are
/// cross-validated against it.
std::vector<AnnotatedSentence> load_corpus(std::istream& in, const EventSchema* schema = nullptr,
                                           std::string_view sep = kDefaultSeparator);
std::vector<AnnotatedSentence> load_corpus_file(const std::string& path,
                                                const EventSchema* schema = nullptr,
                                                std::string_view sep = kDefaultSeparator);
void write_corpus(std::ostream& out, const std::vector<AnnotatedSentence>& corpus);

/// Distinct gold event types in first-occurrence order; its size is the x count.
std::vector<EventType> gold_event_types(const AnnotatedSentence& s);

}  // namespace genex
