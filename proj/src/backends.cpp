#include "genex/backends.hpp"

#include <algorithm>
#include <chrono>

#include <httplib.h>
#include <json.hpp>

#include "genex/error.hpp"
#include "genex/hash.hpp"
#include "genex/prompt_builder.hpp"

namespace genex {

std::vector<double> UniformBackend::score(const ScoreQuery& q) { return std::vector<double>(q.allowed.size(), 0.0); }

// ---------------------------------------------------------------------------
// Oracle

OracleBackend::OracleBackend(ParenList target) : fallback_(to_token_stream(target)) {}

OracleBackend::OracleBackend(std::map<TokenSeq, ParenList> by_prompt, ParenList fallback)
    : fallback_(to_token_stream(fallback)) {
  for (auto& [prompt, target] : by_prompt) streams_.emplace(prompt, to_token_stream(target));
}

std::vector<double> OracleBackend::score(const ScoreQuery& q) {
  std::vector<double> out(q.allowed.size(), 0.0);
  if (q.allowed.empty()) return out;

  auto it = streams_.find(q.prompt);
  const TokenSeq& stream = it != streams_.end() ? it->second : fallback_;

  bool on_path = q.emitted.size() < stream.size() &&
                 std::equal(q.emitted.begin(), q.emitted.end(), stream.begin());
  if (on_path) {
    auto pos = std::find(q.allowed.begin(), q.allowed.end(), stream[q.emitted.size()]);
    if (pos != q.allowed.end()) {
      out[static_cast<std::size_t>(pos - q.allowed.begin())] = 1.0;
      return out;
    }
  }

  // Off-path: close as soon as the grammar lets us. Scores stay <= 0 so no
  // diverged hypothesis can catch up with the gold stream under beam search.
  std::fill(out.begin(), out.end(), -1.0);
  std::size_t pick = 0;
  auto close = std::find(q.allowed.begin(), q.allowed.end(), kCloseParen);
  auto open = std::find(q.allowed.begin(), q.allowed.end(), kOpenParen);
  if (close != q.allowed.end()) {
    pick = static_cast<std::size_t>(close - q.allowed.begin());
  } else if (open != q.allowed.end()) {
    pick = static_cast<std::size_t>(open - q.allowed.begin());
  } else {
    for (std::size_t i = 1; i < q.allowed.size(); ++i) {
      if (token_less(q.allowed[i], q.allowed[pick])) pick = i;
    }
  }
  out[pick] = 0.0;
  return out;
}

BackendPtr oracle_from_gold(const ParenList& target) { return std::make_shared<OracleBackend>(target); }

const char* stage_name(Stage s) {
  switch (s) {
    case Stage::kEtd: return "ETD";
    case Stage::kTrigger: return "TRIGGER";
    case Stage::kArgument: return "ARGUMENT";
  }
  return "?";
}

Stage parse_stage(std::string_view name) {
  if (name == "ETD") return Stage::kEtd;
  if (name == "TRIGGER") return Stage::kTrigger;
  if (name == "ARGUMENT") return Stage::kArgument;
  throw ValidationError("unknown stage '" + std::string(name) + "'");
}

BackendPtr oracle_from_corpus(const std::vector<AnnotatedSentence>& corpus, const EventSchema& schema, Stage stage,
                              std::string_view sep, const Tokenizer& tokenizer) {
  const SeparatorToken separator{std::string(sep)};
  std::map<TokenSeq, ParenList> targets;
  auto span_item = [&](const Sentence& s, Span sp) { return tokenizer.tokenize(join(span_tokens(s, sp))); };

  for (const auto& as : corpus) {
    const auto& s = as.sentence;
    if (stage == Stage::kEtd) {
      ParenList t;
      for (const auto& et : gold_event_types(as)) t.items.push_back(tokenizer.tokenize(et.name));
      targets[etd_prompt(s).rendered] = std::move(t);
      continue;
    }
    for (const auto& rec : as.records) {
      if (stage == Stage::kTrigger) {
        ParenList t;
        for (auto sp : rec.triggers) t.items.push_back(span_item(s, sp));
        targets[trigger_prompt(rec.event_type, s, separator).rendered] = std::move(t);
        continue;
      }
      for (const auto& role : schema.roles_of(rec.event_type)) {
        ParenList t;
        for (const auto& a : rec.arguments) {
          if (a.role == role) t.items.push_back(span_item(s, a.span));
        }
        targets[argument_prompt(rec.event_type, role, s, separator).rendered] = std::move(t);
      }
    }
  }
  return std::make_shared<OracleBackend>(std::move(targets), ParenList{});
}

// ---------------------------------------------------------------------------
// Fuzz

std::vector<double> FuzzBackend::score(const ScoreQuery& q) {
  // Unit separator between fields keeps the hash input unambiguous.
  std::uint64_t h = fnv1a(std::string_view(reinterpret_cast<const char*>(&seed_), sizeof(seed_)));
  for (const auto& t : q.prompt) h = fnv1a("\x1f", fnv1a(t, h));
  h = fnv1a("\x1e", h);
  for (const auto& t : q.emitted) h = fnv1a("\x1f", fnv1a(t, h));
  h = fnv1a("\x1e", h);
  std::vector<double> out;
  out.reserve(q.allowed.size());
  for (const auto& t : q.allowed) out.push_back(unit_interval(splitmix64(fnv1a(t, h) ^ seed_)));
  return out;
}

BackendPtr fuzz_backend(std::uint64_t seed) { return std::make_shared<FuzzBackend>(seed); }

// ---------------------------------------------------------------------------
// Remote

namespace {

void append_array(std::string& out, const std::vector<Token>& toks) {
  out += '[';
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (i) out += ", ";
    out += nlohmann::json(toks[i]).dump();
  }
  out += ']';
}

}  // namespace

std::string score_request_body(const ScoreQuery& q) {
  std::string out = "{\"prompt\": ";
  append_array(out, q.prompt);
  out += ", \"emitted\": ";
  append_array(out, q.emitted);
  out += ", \"allowed\": ";
  append_array(out, q.allowed);
  out += '}';
  return out;
}

std::vector<double> parse_score_response(std::string_view body, std::size_t expected) {
  nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw MalformedResponseError("score response is not a JSON object");
  auto it = j.find("scores");
  if (it == j.end() || !it->is_array()) throw MalformedResponseError("score response lacks a \"scores\" array");
  std::vector<double> out;
  out.reserve(it->size());
  for (const auto& v : *it) {
    if (!v.is_number()) throw MalformedResponseError("non-numeric score in response");
    out.push_back(v.get<double>());
  }
  if (out.size() != expected) {
    throw LengthMismatchError("remote returned " + std::to_string(out.size()) + " scores for " +
                              std::to_string(expected) + " allowed tokens");
  }
  return out;
}

struct RemoteBackend::Impl {
  httplib::Client client;
  Impl(const std::string& host, int port) : client(host, port) {}
};

RemoteBackend::RemoteBackend(const std::string& endpoint, std::chrono::milliseconds timeout) : timeout_(timeout) {
  constexpr std::string_view scheme = "http://";
  std::string_view rest = endpoint;
  if (rest.substr(0, scheme.size()) != scheme) {
    throw ValidationError("remote endpoint must start with http://: '" + endpoint + "'");
  }
  rest.remove_prefix(scheme.size());
  auto slash = rest.find('/');
  std::string_view authority = rest.substr(0, slash);
  if (slash != std::string_view::npos) path_ = std::string(rest.substr(slash));
  while (!path_.empty() && path_.back() == '/') path_.pop_back();
  auto colon = authority.rfind(':');
  if (colon != std::string_view::npos) {
    host_ = std::string(authority.substr(0, colon));
    try {
      std::size_t used = 0;
      port_ = std::stoi(std::string(authority.substr(colon + 1)), &used);
      if (used != authority.size() - colon - 1 || port_ <= 0 || port_ > 65535) throw std::out_of_range("port");
    } catch (const std::exception&) {
      throw ValidationError("bad port in remote endpoint '" + endpoint + "'");
    }
  } else {
    host_ = std::string(authority);
  }
  if (host_.empty()) throw ValidationError("missing host in remote endpoint '" + endpoint + "'");

  impl_ = std::make_unique<Impl>(host_, port_);
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
  impl_->client.set_connection_timeout(secs.count(), usecs.count());
  impl_->client.set_read_timeout(secs.count(), usecs.count());
  impl_->client.set_write_timeout(secs.count(), usecs.count());
  impl_->client.set_keep_alive(true);
}

RemoteBackend::~RemoteBackend() = default;

std::vector<double> RemoteBackend::score(const ScoreQuery& q) {
  const auto url = path_ + "/v1/score";
  const auto started = std::chrono::steady_clock::now();
  auto res = impl_->client.Post(url, score_request_body(q), "application/json");
  if (!res) {
    auto err = res.error();
    auto elapsed = std::chrono::steady_clock::now() - started;
    std::string what = "remote " + host_ + ":" + std::to_string(port_) + url + ": " + httplib::to_string(err);
    if (err == httplib::Error::ConnectionTimeout ||
        ((err == httplib::Error::Read || err == httplib::Error::Write) && elapsed >= timeout_)) {
      throw BackendTimeoutError(what + " (timeout " + std::to_string(timeout_.count()) + " ms)");
    }
    throw BackendConnectionError(what);
  }
  if (res->status != 200) {
    throw BackendStatusError(res->status, "remote returned HTTP " + std::to_string(res->status));
  }
  return parse_score_response(res->body, q.allowed.size());
}

BackendPtr remote_backend(const std::string& endpoint, std::chrono::milliseconds timeout) {
  return std::make_shared<RemoteBackend>(endpoint, timeout);
}

// ---------------------------------------------------------------------------

std::vector<double> SerializedBackend::score(const ScoreQuery& q) {
  std::lock_guard lock(mu_);
  return inner_->score(q);
}

BackendCapabilities SerializedBackend::capabilities() const {
  auto caps = inner_->capabilities();
  caps.concurrent_query_safe = true;
  return caps;
}

BackendPtr serialize_if_unsafe(BackendPtr b) {
  if (!b || b->capabilities().concurrent_query_safe) return b;
  return std::make_shared<SerializedBackend>(std::move(b));
}

}  // namespace genex
