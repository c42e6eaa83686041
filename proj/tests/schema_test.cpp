#include <doctest.h>

#include <sstream>

#include "genex/error.hpp"
#include "genex/schema.hpp"
#include "test_support.hpp"

using namespace genex;

TEST_CASE("load_schema reads types and roles in file order") {
  std::istringstream in("# comment\n\nCONVICT: defendant, place\nATTACK: attacker, place, target, victim\n");
  auto s = load_schema(in);
  REQUIRE(s.size() == 2);
  CHECK(s.all_types() == std::vector<EventType>{{"CONVICT"}, {"ATTACK"}});
  CHECK(s.roles_of({"CONVICT"}) == std::vector<RoleType>{{"defendant"}, {"place"}});
  CHECK(s.roles_of({"ATTACK"}) == std::vector<RoleType>{{"attacker"}, {"place"}, {"target"}, {"victim"}});
  CHECK_THROWS_AS(s.roles_of({"UNKNOWN_TYPE"}), UnknownEventTypeError);
}

TEST_CASE("load_schema rejects invalid files") {
  auto load = [](const std::string& text) {
    std::istringstream in(text);
    return load_schema(in);
  };
  CHECK_THROWS_AS(load(""), ValidationError);
  CHECK_THROWS_AS(load("# only a comment\n"), ValidationError);
  CHECK_THROWS_AS(load("CONVICT: defendant\nCONVICT: place\n"), ValidationError);
  CHECK_THROWS_AS(load("CONVICT:\n"), ValidationError);
  CHECK_THROWS_AS(load("CON(VICT: defendant\n"), ValidationError);
  CHECK_THROWS_AS(load("CONVICT: def endant\n"), ValidationError);
  CHECK_THROWS_AS(load("</s>: a\n"), ValidationError);
  CHECK_THROWS_AS(load("CONVICT: a, a\n"), ValidationError);
  CHECK_THROWS_AS(load("CONVICT defendant\n"), ParseError);
  CHECK_THROWS_AS(load("CONVICT: a,,b\n"), ParseError);
  CHECK_THROWS_AS(load(": a\n"), ParseError);
}

TEST_CASE("bundled ACE schema has 33 types") {
  auto s = testing::ace_schema();
  CHECK(s.all_types().size() == 33);
  CHECK(s.roles_of({"CONVICT"}) == std::vector<RoleType>{{"defendant"}, {"place"}});
  for (const auto& t : s.all_types()) CHECK_NOTHROW(s.roles_of(t));
}

TEST_CASE("single-type schema") {
  std::istringstream in("MEET: entity\n");
  CHECK(load_schema(in).all_types() == std::vector<EventType>{{"MEET"}});
}

TEST_CASE("write_schema round trips and loading is deterministic") {
  auto a = testing::ace_schema();
  std::ostringstream out;
  write_schema(out, a);
  std::istringstream in(out.str());
  auto b = load_schema(in);
  CHECK(a == b);
  CHECK(testing::ace_schema() == a);
}

TEST_CASE("role_index follows file order") {
  auto s = testing::small_schema();
  CHECK(s.role_index({"ATTACK"}, {"target"}) == 2);
  CHECK_THROWS_AS(s.role_index({"ATTACK"}, {"defendant"}), UnknownRoleError);
  CHECK(s.has_role({"CONVICT"}, {"place"}));
  CHECK_FALSE(s.has_role({"CONVICT"}, {"attacker"}));
}
