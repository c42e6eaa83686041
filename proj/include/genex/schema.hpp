#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "genex/tokens.hpp"

namespace genex {

struct EventType {
  std::string name;
  auto operator<=>(const EventType&) const = default;
};

struct RoleType {
  std::string name;
  auto operator<=>(const RoleType&) const = default;
};

/// Throws ValidationError unless `name` is a legal type/role label: non-empty,
/// no parenthesis, no whitespace, and not equal to `sep`.
void validate_label(std::string_view name, std::string_view sep = kDefaultSeparator);

/// Closed set of event types, each with its ordered role list. Immutable once built.
class EventSchema {
 public:
  using Entry = std::pair<EventType, std::vector<RoleType>>;

  EventSchema() = default;
  /// Validates invariants (unique keys, non-empty role lists, at least one type).
  explicit EventSchema(std::vector<Entry> entries, std::string_view sep = kDefaultSeparator);

  const std::vector<RoleType>& roles_of(const EventType& et) const;
  std::vector<EventType> all_types() const;
  bool contains(const EventType& et) const { return index_.count(et.name) != 0; }
  bool has_role(const EventType& et, const RoleType& rt) const;
  /// Position of `rt` in the role list of `et`; throws like roles_of.
  std::size_t role_index(const EventType& et, const RoleType& rt) const;

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  bool operator==(const EventSchema& other) const { return entries_ == other.entries_; }

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Parses the line-oriented schema format: `TYPE: role1, role2`, `#` comments, blank lines.
EventSchema load_schema(std::istream& in, std::string_view sep = kDefaultSeparator);
EventSchema load_schema_file(const std::string& path, std::string_view sep = kDefaultSeparator);

void write_schema(std::ostream& out, const EventSchema& schema);

inline const std::vector<RoleType>& roles_of(const EventSchema& s, const EventType& et) {
  return s.roles_of(et);
}
inline std::vector<EventType> all_types(const EventSchema& s) { return s.all_types(); }

}  // namespace genex
