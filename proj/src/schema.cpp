#include "genex/schema.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "genex/error.hpp"

namespace genex {

namespace {

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

}  // namespace

void validate_label(std::string_view name, std::string_view sep) {
  if (name.empty()) throw ValidationError("empty label");
  if (!is_content_token(name)) {
    throw ValidationError("label '" + std::string(name) + "' contains a parenthesis or whitespace");
  }
  if (name == sep) throw ValidationError("label equals the separator token '" + std::string(sep) + "'");
}

EventSchema::EventSchema(std::vector<Entry> entries, std::string_view sep) : entries_(std::move(entries)) {
  if (entries_.empty()) throw ValidationError("schema has no event types");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& [et, roles] = entries_[i];
    validate_label(et.name, sep);
    if (!index_.emplace(et.name, i).second) {
      throw ValidationError("duplicate event type '" + et.name + "'");
    }
    if (roles.empty()) throw ValidationError("event type '" + et.name + "' has no roles");
    std::set<std::string> seen;
    for (const auto& r : roles) {
      validate_label(r.name, sep);
      if (!seen.insert(r.name).second) {
        throw ValidationError("duplicate role '" + r.name + "' in '" + et.name + "'");
      }
    }
  }
}

const std::vector<RoleType>& EventSchema::roles_of(const EventType& et) const {
  auto it = index_.find(et.name);
  if (it == index_.end()) throw UnknownEventTypeError("unknown event type '" + et.name + "'");
  return entries_[it->second].second;
}

std::vector<EventType> EventSchema::all_types() const {
  std::vector<EventType> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.first);
  return out;
}

bool EventSchema::has_role(const EventType& et, const RoleType& rt) const {
  auto it = index_.find(et.name);
  if (it == index_.end()) return false;
  for (const auto& r : entries_[it->second].second) {
    if (r == rt) return true;
  }
  return false;
}

std::size_t EventSchema::role_index(const EventType& et, const RoleType& rt) const {
  const auto& roles = roles_of(et);
  for (std::size_t i = 0; i < roles.size(); ++i) {
    if (roles[i] == rt) return i;
  }
  throw UnknownRoleError("role '" + rt.name + "' is not a role of '" + et.name + "'");
}

EventSchema load_schema(std::istream& in, std::string_view sep) {
  std::vector<EventSchema::Entry> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto colon = body.find(':');
    if (colon == std::string_view::npos) {
      throw ParseError("schema line " + std::to_string(lineno) + ": expected 'TYPE: role, ...'");
    }
    auto type_name = trim(body.substr(0, colon));
    if (type_name.empty()) {
      throw ParseError("schema line " + std::to_string(lineno) + ": missing event type name");
    }
    std::vector<RoleType> roles;
    auto rest = body.substr(colon + 1);
    if (!trim(rest).empty()) {
      std::size_t pos = 0;
      while (true) {
        auto comma = rest.find(',', pos);
        auto piece = trim(rest.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        if (piece.empty()) {
          throw ParseError("schema line " + std::to_string(lineno) + ": empty role name");
        }
        roles.push_back(RoleType{std::string(piece)});
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
      }
    }
    entries.emplace_back(EventType{std::string(type_name)}, std::move(roles));
  }
  return EventSchema(std::move(entries), sep);
}

EventSchema load_schema_file(const std::string& path, std::string_view sep) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open schema file '" + path + "'");
  return load_schema(in, sep);
}

void write_schema(std::ostream& out, const EventSchema& schema) {
  for (const auto& [et, roles] : schema.entries()) {
    out << et.name << ':';
    for (std::size_t i = 0; i < roles.size(); ++i) out << (i ? ", " : " ") << roles[i].name;
    out << '\n';
  }
}

}  // namespace genex
