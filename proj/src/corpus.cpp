#include "genex/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include "genex/error.hpp"

namespace genex {

using nlohmann::json;
using nlohmann::ordered_json;

TokenSeq span_tokens(const Sentence& s, Span span) {
  if (span.start >= span.end || span.end > s.tokens.size()) {
    throw SpanOutOfRangeError("span [" + std::to_string(span.start) + ", " + std::to_string(span.end) +
                              ") out of range for " + std::to_string(s.tokens.size()) + " tokens");
  }
  return TokenSeq(s.tokens.begin() + static_cast<std::ptrdiff_t>(span.start),
                  s.tokens.begin() + static_cast<std::ptrdiff_t>(span.end));
}

void validate_sentence(const Sentence& s, std::string_view sep) {
  if (s.tokens.empty()) throw ValidationError("sentence '" + s.id + "' has no tokens");
  for (const auto& t : s.tokens) {
    if (!is_content_token(t)) {
      throw ValidationError("sentence '" + s.id + "': illegal token '" + t + "'");
    }
    if (t == sep) throw ValidationError("sentence '" + s.id + "' contains the separator token");
  }
}

void canonicalize(EventRecord& rec, const EventSchema* schema) {
  std::sort(rec.triggers.begin(), rec.triggers.end());
  rec.triggers.erase(std::unique(rec.triggers.begin(), rec.triggers.end()), rec.triggers.end());

  std::map<std::string, std::size_t> order;
  if (schema != nullptr && schema->contains(rec.event_type)) {
    const auto& roles = schema->roles_of(rec.event_type);
    for (std::size_t i = 0; i < roles.size(); ++i) order.emplace(roles[i].name, i);
  }
  for (const auto& a : rec.arguments) order.emplace(a.role.name, order.size());
  std::stable_sort(rec.arguments.begin(), rec.arguments.end(), [&](const Argument& a, const Argument& b) {
    auto ra = order.at(a.role.name), rb = order.at(b.role.name);
    if (ra != rb) return ra < rb;
    return a.span < b.span;
  });
  rec.arguments.erase(std::unique(rec.arguments.begin(), rec.arguments.end()), rec.arguments.end());
}

namespace {

Span parse_span(const json& j, const Sentence& s) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw ParseError("sentence '" + s.id + "': span must be [start, end]");
  }
  auto start = j[0].get<long long>(), end = j[1].get<long long>();
  if (start < 0 || end <= start || static_cast<std::size_t>(end) > s.tokens.size()) {
    throw SpanOutOfRangeError("sentence '" + s.id + "': span [" + std::to_string(start) + ", " +
                              std::to_string(end) + ") out of range for " +
                              std::to_string(s.tokens.size()) + " tokens");
  }
  return Span{static_cast<std::size_t>(start), static_cast<std::size_t>(end)};
}

ordered_json span_json(Span s) { return ordered_json::array({s.start, s.end}); }

}  // namespace

AnnotatedSentence parse_annotated_sentence(const json& j, const EventSchema* schema, std::string_view sep) {
  if (!j.is_object()) throw ParseError("corpus line is not a JSON object");
  AnnotatedSentence out;
  try {
    out.sentence.id = j.at("id").get<std::string>();
    out.sentence.tokens = j.at("tokens").get<TokenSeq>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("corpus line: ") + e.what());
  }
  validate_sentence(out.sentence, sep);

  const auto& s = out.sentence;
  std::vector<EventRecord> merged;
  auto records = j.find("records");
  if (records != j.end()) {
    if (!records->is_array()) throw ParseError("sentence '" + s.id + "': records must be an array");
    for (const auto& rj : *records) {
      EventType et;
      try {
        et.name = rj.at("type").get<std::string>();
      } catch (const json::exception& e) {
        throw ParseError("sentence '" + s.id + "': " + e.what());
      }
      validate_label(et.name, sep);
      if (schema != nullptr && !schema->contains(et)) {
        throw UnknownEventTypeError("sentence '" + s.id + "': unknown event type '" + et.name + "'");
      }
      auto it = std::find_if(merged.begin(), merged.end(), [&](const EventRecord& r) { return r.event_type == et; });
      if (it == merged.end()) {
        merged.push_back(EventRecord{et, {}, {}});
        it = std::prev(merged.end());
      }
      if (auto tr = rj.find("triggers"); tr != rj.end()) {
        if (!tr->is_array()) throw ParseError("sentence '" + s.id + "': triggers must be an array");
        for (const auto& sj : *tr) it->triggers.push_back(parse_span(sj, s));
      }
      if (auto ar = rj.find("arguments"); ar != rj.end()) {
        if (!ar->is_array()) throw ParseError("sentence '" + s.id + "': arguments must be an array");
        for (const auto& aj : *ar) {
          Argument a;
          try {
            a.role.name = aj.at("role").get<std::string>();
            a.span = parse_span(aj.at("span"), s);
          } catch (const json::exception& e) {
            throw ParseError("sentence '" + s.id + "': " + e.what());
          }
          validate_label(a.role.name, sep);
          if (schema != nullptr && !schema->has_role(et, a.role)) {
            throw UnknownRoleError("sentence '" + s.id + "': role '" + a.role.name + "' is not a role of '" +
                                   et.name + "'");
          }
          it->arguments.push_back(std::move(a));
        }
      }
    }
  }
  for (auto& r : merged) canonicalize(r, schema);
  out.records = std::move(merged);
  return out;
}

ordered_json records_to_json(const std::vector<EventRecord>& records) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : records) {
    ordered_json rj;
    rj["type"] = r.event_type.name;
    rj["triggers"] = ordered_json::array();
    for (auto sp : r.triggers) rj["triggers"].push_back(span_json(sp));
    rj["arguments"] = ordered_json::array();
    for (const auto& a : r.arguments) {
      ordered_json aj;
      aj["role"] = a.role.name;
      aj["span"] = span_json(a.span);
      rj["arguments"].push_back(std::move(aj));
    }
    arr.push_back(std::move(rj));
  }
  return arr;
}

ordered_json to_json(const AnnotatedSentence& as) {
  ordered_json j;
  j["id"] = as.sentence.id;
  j["tokens"] = as.sentence.tokens;
  j["records"] = records_to_json(as.records);
  return j;
}

std::vector<AnnotatedSentence> load_corpus(std::istream& in, const EventSchema* schema, std::string_view sep) {
  std::vector<AnnotatedSentence> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError("corpus line " + std::to_string(lineno) + ": " + e.what());
    }
    out.push_back(parse_annotated_sentence(j, schema, sep));
  }
  return out;
}

std::vector<AnnotatedSentence> load_corpus_file(const std::string& path, const EventSchema* schema,
                                                std::string_view sep) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open corpus file '" + path + "'");
  return load_corpus(in, schema, sep);
}

void write_corpus(std::ostream& out, const std::vector<AnnotatedSentence>& corpus) {
  for (const auto& as : corpus) out << to_json(as).dump() << '\n';
}

std::vector<EventType> gold_event_types(const AnnotatedSentence& s) {
  std::vector<EventType> out;
  for (const auto& r : s.records) {
    if (std::find(out.begin(), out.end(), r.event_type) == out.end()) out.push_back(r.event_type);
  }
  return out;
}

}  // namespace genex
