#pragma once

#include <optional>
#include <string>
#include <vector>

#include "taskworld/predicate.hpp"
#include "taskworld/primitives.hpp"

namespace taskworld {

// One manipulation unit: target object, optional initial/goal supports and
// the boundary predicate sets.
struct SimpleTask {
  std::string name;
  std::string description;
  std::string target;                       // o_t, must resolve in the scene
  std::optional<std::string> support_init;  // o_s1 ("gripper" allowed)
  std::optional<std::string> support_goal;  // o_s2
  Conjunction init;
  Conjunction goal;
  std::string bddl_category;

  // Whether the robot starts away from the target and the initial flow must
  // lead with NAVIGATE_TO_TARGET. Set by decomposition: false for the first
  // subtask (the robot spawns at its target), true when the target changes.
  bool requires_navigation = false;

  // Throws ValidationError on a missing target or empty boundary sets.
  void validate() const;
};

// Semantic bridge between consecutive simple tasks; consumes no physical
// time beyond the one-tick margin.
struct ActionTransfer {
  std::string prev_target;
  std::string next_target;
  PrimitiveKind end_action = PrimitiveKind::Ungrasp;
  PrimitiveKind start_action = PrimitiveKind::NavigateToTarget;
};

struct ComplexTask {
  std::string name;
  std::string detail;
  std::vector<SimpleTask> subtasks;
  std::vector<ActionTransfer> transfers;  // |subtasks| - 1

  void validate() const;
};

struct TaskKeyword {
  std::string text;
  std::string scene_id;
};

}  // namespace taskworld
