#include <random>

#include "doctest.h"
#include "taskworld/bddl.hpp"

using namespace taskworld;

namespace {

SimpleTask place_task() {
  SimpleTask task;
  task.name = "put_glass_into_refrigerator";
  task.description = "carry the glass into the refrigerator";
  task.target = "glass_0";
  task.support_init = "gripper";
  task.support_goal = "refrigerator_0";
  task.init = {Predicate::in_gripper("glass_0")};
  task.goal = {Predicate::inside("glass_0", "refrigerator_0")};
  task.bddl_category = "glass";
  return task;
}

std::string shuffle_whitespace(const std::string& text, std::mt19937& rng) {
  std::string out;
  std::uniform_int_distribution<int> pad(0, 3);
  for (char c : text) {
    if (c == ' ' || c == '\n') {
      const int n = 1 + pad(rng);
      for (int i = 0; i < n; ++i) out += (pad(rng) % 2 == 0 ? ' ' : '\n');
      if (pad(rng) == 0) out += '\t';
    } else {
      out += c;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("emitted document carries the boundary predicates verbatim") {
  const std::string text = emit_bddl(place_task());
  CHECK(text.find("(inside glass_0 gripper)") != std::string::npos);
  CHECK(text.find("(inside glass_0 refrigerator_0)") != std::string::npos);
  CHECK(text.find("(:init") != std::string::npos);
  CHECK(text.find("(:goal") != std::string::npos);
}

TEST_CASE("parse handles negation and the gripper pseudo-object") {
  const BddlDocument doc = parse_bddl(
      "(:init (open refrigerator_0))\n"
      "(:goal (not (open refrigerator_0)) (inside glass_0 gripper))\n");
  REQUIRE(doc.init.size() == 1);
  REQUIRE(doc.goal.size() == 2);
  CHECK(doc.init[0] == Predicate::open("refrigerator_0"));
  CHECK(doc.goal[0] == Predicate::open("refrigerator_0", true));
  CHECK(doc.goal[1].name == PredicateName::InGripper);
  CHECK(doc.goal[1].args == std::vector<std::string>{"glass_0"});
}

TEST_CASE("parse errors carry line and column context") {
  try {
    parse_bddl("(:init (ontop a b)\n(:goal (open f))");
    FAIL("expected BddlParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BddlParseError);
    CHECK(std::string(e.what()).find("line") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_bddl("(:init (frobnicate a b)) (:goal (open f))"), Error);
  CHECK_THROWS_AS(parse_bddl("(:goal (open f))"), Error);  // init missing
  CHECK_THROWS_AS(parse_bddl("(:init (ontop a)) (:goal (open f))"), Error);
}

TEST_CASE("parse of emit is the identity on the predicate sets") {
  const SimpleTask task = place_task();
  const BddlDocument doc = parse_bddl(emit_bddl(task));
  CHECK(doc.init == task.init);
  CHECK(doc.goal == task.goal);
}

TEST_CASE("parsing is whitespace-insensitive") {
  const SimpleTask task = place_task();
  const std::string canonical = emit_bddl(task);
  std::mt19937 rng(99);
  for (int i = 0; i < 50; ++i) {
    const BddlDocument doc = parse_bddl(shuffle_whitespace(canonical, rng));
    CHECK(doc.init == task.init);
    CHECK(doc.goal == task.goal);
  }
}
