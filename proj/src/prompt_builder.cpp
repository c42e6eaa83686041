#include "genex/prompt_builder.hpp"

#include "genex/error.hpp"

namespace genex {

Prompt make_prompt(std::vector<TokenSeq> segments, const SeparatorToken& sep) {
  Prompt p;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (i) p.rendered.push_back(sep.text);
    p.rendered.insert(p.rendered.end(), segments[i].begin(), segments[i].end());
  }
  p.segments = std::move(segments);
  return p;
}

Prompt etd_prompt(const Sentence& s) { return make_prompt({s.tokens}, SeparatorToken{}); }

Prompt trigger_prompt(const EventType& et, const Sentence& s, const SeparatorToken& sep) {
  return make_prompt({{et.name}, s.tokens}, sep);
}

Prompt argument_prompt(const EventType& et, const RoleType& rt, const Sentence& s, const SeparatorToken& sep,
                       const EventSchema* schema) {
  if (schema != nullptr && !schema->has_role(et, rt)) {
    throw RoleMismatchError("'" + rt.name + "' is not a role of '" + et.name + "'");
  }
  return make_prompt({{et.name}, {rt.name}, s.tokens}, sep);
}

}  // namespace genex
