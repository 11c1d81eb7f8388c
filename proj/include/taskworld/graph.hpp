#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "taskworld/scene.hpp"
#include "taskworld/task.hpp"
#include "taskworld/world.hpp"

namespace taskworld {

// A vertex of the object-action graph: (object, primitive kind, step index).
// Step indices are 1-based and relative to one simple task, never a global
// timestamp.
struct GraphNode {
  std::string object;
  PrimitiveKind kind = PrimitiveKind::Approach;
  int step = 1;

  bool operator==(const GraphNode&) const = default;
};

// The scene-conditioned object-action graph. Vertices are never
// materialized: the full product set is validated and enumerated on demand.
class TaskGraph {
 public:
  TaskGraph(std::vector<std::string> objects, int max_steps);

  const std::vector<std::string>& objects() const { return objects_; }
  int max_steps() const { return max_steps_; }

  std::uint64_t node_count() const;
  bool valid_node(const GraphNode& node) const;

  // Intra-task edge: same object slice, strictly ascending consecutive steps.
  bool admissible_intra_edge(const GraphNode& from, const GraphNode& to) const;

 private:
  std::vector<std::string> objects_;
  int max_steps_;
};

// Throws ValidationError when max_steps < 1.
TaskGraph build_graph(const SceneConfig& scene, int max_steps = 32);

// Projects a flow into the target object's slice: node j = (o_t, kind_j, j).
// Throws SliceViolation when the flow does not fit the graph.
std::vector<GraphNode> embed_flow(const TaskGraph& graph, const SimpleTask& task,
                                  const ActionFlow& flow);

// True iff the next subtask's init conjunction holds on the post-transfer
// state (one tick past `state_after_prev`).
bool check_boundary(const Conjunction& prev_goal, const Conjunction& next_init,
                    const WorldState& state_after_prev);

struct SegmentResult {
  bool executed = false;
  bool success = false;
  std::optional<long> delta1_tick;
  std::optional<long> delta2_tick;
};

struct ReachabilityReport {
  bool feasible = false;
  std::vector<SegmentResult> segment_results;
  std::vector<bool> transfer_results;  // boundary_match per transfer
  // First failing subtask index (0-based); a mismatch at the transfer
  // following segment k also reports k.
  std::optional<int> failing_index;

  nlohmann::json to_json() const;
};

// Executes the whole plan segment by segment (transfers between), recording
// per-segment success and per-boundary consistency. Segments after a failure
// still run; feasibility is the conjunction of everything.
ReachabilityReport check_reachability(const SceneConfig& scene, const ComplexTask& plan,
                                      const std::vector<ActionFlow>& flows,
                                      const RobotConfig& robot = {},
                                      const FaultSpec& faults = {});

}  // namespace taskworld
