#include "taskworld/task.hpp"

namespace taskworld {

void SimpleTask::validate() const {
  if (target.empty()) {
    throw Error(ErrorCode::ValidationError, "simple task '" + name + "' has no target");
  }
  if (init.empty() || goal.empty()) {
    throw Error(ErrorCode::ValidationError,
                "simple task '" + name + "' needs non-empty init and goal conjunctions");
  }
  for (const auto& p : init) p.validate();
  for (const auto& p : goal) p.validate();
}

void ComplexTask::validate() const {
  if (subtasks.empty()) {
    throw Error(ErrorCode::InvalidDecomposition, "complex task '" + name + "' has no subtasks");
  }
  if (transfers.size() + 1 != subtasks.size()) {
    throw Error(ErrorCode::ValidationError,
                "complex task '" + name + "' needs exactly |subtasks|-1 transfers");
  }
  for (const auto& t : subtasks) t.validate();
}

}  // namespace taskworld
