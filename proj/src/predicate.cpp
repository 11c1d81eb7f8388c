#include "taskworld/predicate.hpp"

namespace taskworld {

const char* predicate_name_str(PredicateName name) {
  switch (name) {
    case PredicateName::OnTop: return "ontop";
    case PredicateName::Inside: return "inside";
    case PredicateName::Open: return "open";
    case PredicateName::InRoom: return "inroom";
    case PredicateName::InGripper: return "inside";  // fixture form: (inside x gripper)
  }
  return "?";
}

Predicate Predicate::on_top(std::string a, std::string b, bool negated) {
  return {PredicateName::OnTop, {std::move(a), std::move(b)}, negated};
}

Predicate Predicate::inside(std::string a, std::string b, bool negated) {
  if (b == kGripperAtom) return in_gripper(std::move(a), negated);
  return {PredicateName::Inside, {std::move(a), std::move(b)}, negated};
}

Predicate Predicate::open(std::string fixture, bool negated) {
  return {PredicateName::Open, {std::move(fixture)}, negated};
}

Predicate Predicate::in_room(std::string subject, std::string room, bool negated) {
  return {PredicateName::InRoom, {std::move(subject), std::move(room)}, negated};
}

Predicate Predicate::in_gripper(std::string target, bool negated) {
  return {PredicateName::InGripper, {std::move(target)}, negated};
}

void Predicate::validate() const {
  const size_t arity =
      (name == PredicateName::Open || name == PredicateName::InGripper) ? 1 : 2;
  if (args.size() != arity) {
    throw Error(ErrorCode::ValidationError,
                std::string("predicate '") + predicate_name_str(name) + "' expects " +
                    std::to_string(arity) + " argument(s)");
  }
  for (const auto& a : args) {
    if (a.empty()) throw Error(ErrorCode::ValidationError, "empty predicate argument");
  }
}

std::string Predicate::key() const {
  std::string out = "(";
  out += predicate_name_str(name);
  for (const auto& a : args) out += " " + a;
  if (name == PredicateName::InGripper) out += std::string(" ") + kGripperAtom;
  out += ")";
  return out;
}

std::string Predicate::to_sexpr() const {
  return negated ? "(not " + key() + ")" : key();
}

std::string conjunction_to_string(const Conjunction& c, const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < c.size(); ++i) {
    if (i > 0) out += sep;
    out += c[i].to_sexpr();
  }
  return out;
}

}  // namespace taskworld
