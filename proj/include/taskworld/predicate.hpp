#pragma once

#include <string>
#include <vector>

#include "taskworld/errors.hpp"

namespace taskworld {

inline constexpr const char* kGripperAtom = "gripper";
inline constexpr const char* kRobotAtom = "robot";

enum class PredicateName { OnTop, Inside, Open, InRoom, InGripper };

const char* predicate_name_str(PredicateName name);

// One ground literal. OnTop/Inside/InRoom are binary, Open/InGripper unary.
// InGripper renders as the fixture form "(inside <x> gripper)".
struct Predicate {
  PredicateName name = PredicateName::OnTop;
  std::vector<std::string> args;
  bool negated = false;

  bool operator==(const Predicate&) const = default;

  static Predicate on_top(std::string a, std::string b, bool negated = false);
  static Predicate inside(std::string a, std::string b, bool negated = false);
  static Predicate open(std::string fixture, bool negated = false);
  static Predicate in_room(std::string subject, std::string room, bool negated = false);
  static Predicate in_gripper(std::string target, bool negated = false);

  // Arity check; throws ValidationError.
  void validate() const;

  Predicate negate() const {
    Predicate p = *this;
    p.negated = !p.negated;
    return p;
  }

  // Positive-literal identity, used as a snapshot key: "(ontop a b)".
  std::string key() const;
  // Full s-expression including negation: "(not (ontop a b))".
  std::string to_sexpr() const;
};

using Conjunction = std::vector<Predicate>;

std::string conjunction_to_string(const Conjunction& c, const std::string& sep = ", ");

}  // namespace taskworld
