#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "taskworld/geometry.hpp"
#include "taskworld/predicate.hpp"
#include "taskworld/primitives.hpp"
#include "taskworld/scene.hpp"
#include "taskworld/task.hpp"

namespace taskworld {

// Tunables of the kinematic model. Values are engine constants, not per-scene
// data; they are grouped so tests can reference them by name.
struct KinematicConstants {
  static constexpr double kOnTopEpsilonZ = 0.01;      // resting-contact tolerance
  static constexpr double kWallThickness = 0.05;      // fixture interior inset
  static constexpr double kApproachOffset = 0.25;     // pre-grasp standoff
  static constexpr double kGraspTolerance = 0.06;     // horizontal seize radius
  static constexpr double kStandoffDistance = 0.8;    // x robot scale, from nearest face
  static constexpr double kDoorDisturbanceDelta = 0.5;
  static constexpr double kCloseAuthorityMargin = 0.1;  // residual rule threshold margin
  static constexpr double kSweepStep = 0.01;            // collision sweep granularity
};

enum class EventKind {
  Collision,
  DoorDisturbed,
  GraspEmpty,
  ObjectDropped,
  NavArrived,
  JointMoved,
  TransferApplied,
};

const char* event_kind_name(EventKind kind);

struct ExecutionEvent {
  long tick = 0;
  EventKind kind = EventKind::Collision;
  std::vector<std::string> subjects;
  std::string detail;
};

enum class GripperState { Open, Closed };

struct ObjectPose {
  Vec3 position;
  double yaw = 0.0;
};

struct EefOffset {
  double forward = 0.0;  // along base heading
  double left = 0.0;
  double up = 0.0;  // world height (base sits on the floor)
};

// Per-episode deterministic fault injection, driven by scenario manifests.
struct FaultSpec {
  std::set<std::string> welded_targets;    // GRASP cannot seize these
  double support_standoff_extra = 0.0;     // NAVIGATE_TO_SUPPORT lands this much farther
};

struct TaskContext {
  std::string target;
  std::optional<std::string> support_init;
  std::optional<std::string> support_goal;

  static TaskContext from(const SimpleTask& task) {
    return {task.target, task.support_init, task.support_goal};
  }
};

// Value-semantics world snapshot. Copies are independent episodes.
struct WorldState {
  std::shared_ptr<const SceneConfig> scene;
  RobotConfig robot;
  FaultSpec faults;

  std::map<std::string, ObjectPose> object_poses;
  std::map<std::string, double> joint_fractions;

  double base_x = 0.0;
  double base_y = 0.0;
  double heading = 0.0;
  EefOffset eef_offset;

  GripperState gripper = GripperState::Open;
  std::optional<std::string> held_object;
  Vec3 held_offset;  // world-frame offset, fixed while held
  std::optional<std::string> grasped_handle;

  long tick = 0;
  std::vector<ExecutionEvent> event_log;

  Vec3 eef_position() const;
  Vec3 object_position(const std::string& id) const;
  Aabb object_world_aabb(const std::string& id) const;
  double joint_fraction(const std::string& id) const;

  // Carry pose the eef returns to on RETREAT.
  EefOffset carry_pose() const;
};

// Builds the initial world from the scene. When `start_target` is given the
// robot spawns at that object's standoff pose, mirroring the execution setup
// where episodes begin at a fixed offset from the first target.
WorldState make_world(std::shared_ptr<const SceneConfig> scene, RobotConfig robot = {},
                      FaultSpec faults = {},
                      const std::optional<std::string>& start_target = std::nullopt);

bool evaluate_predicate(const WorldState& state, const Predicate& p);
bool evaluate_conjunction(const WorldState& state, const Conjunction& c);
// Throws EmptyGoal on an empty conjunction.
bool evaluate_goal(const WorldState& state, const Conjunction& goal);

using PredicateSnapshot = std::vector<std::pair<Predicate, bool>>;

// Exhaustive deterministic valuation: OnTop/Inside over ordered object
// pairs, Open over articulated fixtures, in-gripper over objects, the
// robot's room membership.
PredicateSnapshot snapshot_predicates(const WorldState& state);

// In-place step; returns the events it emitted (also appended to the log).
std::vector<ExecutionEvent> apply_primitive(WorldState& state, const PrimitiveAction& action,
                                            const TaskContext& ctx);

inline std::pair<WorldState, std::vector<ExecutionEvent>> execute_primitive(
    WorldState state, const PrimitiveAction& action, const TaskContext& ctx) {
  auto events = apply_primitive(state, action, ctx);
  return {std::move(state), std::move(events)};
}

struct StepRecord {
  PrimitiveAction action;
  WorldState post_state;
  std::vector<ExecutionEvent> events;
  int duration_ticks = 0;
};

using IdPair = std::pair<std::string, std::string>;

struct ExecutionTrace {
  WorldState initial_state;
  std::vector<StepRecord> steps;
  bool success = false;
  bool truncated = false;
  std::set<IdPair> changed_pairs;
  std::optional<long> delta1_tick;  // first init predicate released
  std::optional<long> delta2_tick;  // goal first satisfied

  bool has_collision_events() const;
};

// Runs the whole flow (soft events never abort), evaluates the goal on the
// final state and diffs predicate snapshots per step.
ExecutionTrace execute_flow(const WorldState& state, const ActionFlow& flow,
                            const SimpleTask& task);

// One-tick context switch; physical state and every predicate valuation are
// untouched.
WorldState apply_transfer(const WorldState& state, const ActionTransfer& transfer);

// JSONL export: header line with scene/task ids, then one line per step.
std::string trace_to_jsonl(const ExecutionTrace& trace, const std::string& scene_id,
                           const std::string& task_name);

}  // namespace taskworld
