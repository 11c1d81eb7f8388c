#pragma once

#include <string>
#include <utility>

#include "taskworld/predicate.hpp"
#include "taskworld/task.hpp"

namespace taskworld {

// Renders the subtask's boundary conditions as the line-oriented
// s-expression document:
//
//   (:init
//     (ontop glass_0 table_0)
//   )
//   (:goal
//     (not (ontop glass_0 table_0))
//   )
std::string emit_bddl(const SimpleTask& subtask);

struct BddlDocument {
  Conjunction init;
  Conjunction goal;
};

// Whitespace-insensitive inverse of emit_bddl. Throws BddlParseError with
// line/column context.
BddlDocument parse_bddl(const std::string& text);

}  // namespace taskworld
