#include "taskworld/graph.hpp"

#include <algorithm>

namespace taskworld {

TaskGraph::TaskGraph(std::vector<std::string> objects, int max_steps)
    : objects_(std::move(objects)), max_steps_(max_steps) {
  if (max_steps_ < 1) {
    throw Error(ErrorCode::ValidationError, "max_steps must be at least 1");
  }
}

std::uint64_t TaskGraph::node_count() const {
  return static_cast<std::uint64_t>(objects_.size()) * kPrimitiveCount *
         static_cast<std::uint64_t>(max_steps_);
}

bool TaskGraph::valid_node(const GraphNode& node) const {
  if (node.step < 1 || node.step > max_steps_) return false;
  return std::find(objects_.begin(), objects_.end(), node.object) != objects_.end();
}

bool TaskGraph::admissible_intra_edge(const GraphNode& from, const GraphNode& to) const {
  return valid_node(from) && valid_node(to) && from.object == to.object &&
         to.step == from.step + 1;
}

TaskGraph build_graph(const SceneConfig& scene, int max_steps) {
  std::vector<std::string> ids;
  ids.reserve(scene.objects.size());
  for (const auto& obj : scene.objects) ids.push_back(obj.id);
  return TaskGraph(std::move(ids), max_steps);
}

std::vector<GraphNode> embed_flow(const TaskGraph& graph, const SimpleTask& task,
                                  const ActionFlow& flow) {
  if (flow.empty()) throw Error(ErrorCode::EmptyFlow, "cannot embed an empty flow");
  if (static_cast<int>(flow.size()) > graph.max_steps()) {
    throw Error(ErrorCode::SliceViolation,
                "flow of length " + std::to_string(flow.size()) + " exceeds max_steps " +
                    std::to_string(graph.max_steps()));
  }
  std::vector<GraphNode> nodes;
  nodes.reserve(flow.size());
  for (size_t j = 0; j < flow.size(); ++j) {
    GraphNode node{task.target, flow[j].kind, static_cast<int>(j) + 1};
    if (!graph.valid_node(node)) {
      throw Error(ErrorCode::SliceViolation,
                  "node (" + node.object + ", step " + std::to_string(node.step) +
                      ") lies outside the graph");
    }
    nodes.push_back(std::move(node));
  }
  return nodes;
}

bool check_boundary(const Conjunction& prev_goal, const Conjunction& next_init,
                    const WorldState& state_after_prev) {
  if (prev_goal.empty() || next_init.empty()) {
    throw Error(ErrorCode::EmptyGoal, "boundary conjunctions must be non-empty");
  }
  // The transfer is an identity on predicates; advance the one-tick margin
  // and evaluate the incoming init there.
  WorldState after = state_after_prev;
  after.tick += 1;
  return evaluate_conjunction(after, next_init);
}

nlohmann::json ReachabilityReport::to_json() const {
  nlohmann::json j;
  j["feasible"] = feasible;
  nlohmann::json segs = nlohmann::json::array();
  for (const auto& s : segment_results) {
    nlohmann::json seg;
    seg["executed"] = s.executed;
    seg["success"] = s.success;
    seg["delta1_tick"] = s.delta1_tick ? nlohmann::json(*s.delta1_tick) : nlohmann::json();
    seg["delta2_tick"] = s.delta2_tick ? nlohmann::json(*s.delta2_tick) : nlohmann::json();
    segs.push_back(std::move(seg));
  }
  j["segments"] = std::move(segs);
  j["transfers"] = transfer_results;
  j["failing_index"] = failing_index ? nlohmann::json(*failing_index) : nlohmann::json();
  return j;
}

ReachabilityReport check_reachability(const SceneConfig& scene, const ComplexTask& plan,
                                      const std::vector<ActionFlow>& flows,
                                      const RobotConfig& robot, const FaultSpec& faults) {
  plan.validate();
  if (flows.size() != plan.subtasks.size()) {
    throw Error(ErrorCode::ValidationError,
                "need exactly one flow per subtask (" + std::to_string(plan.subtasks.size()) +
                    " subtasks, " + std::to_string(flows.size()) + " flows)");
  }

  ReachabilityReport report;
  report.segment_results.resize(plan.subtasks.size());

  auto shared_scene = std::make_shared<const SceneConfig>(scene);
  WorldState state = make_world(shared_scene, robot, faults, plan.subtasks.front().target);

  for (size_t k = 0; k < plan.subtasks.size(); ++k) {
    const SimpleTask& task = plan.subtasks[k];
    ExecutionTrace trace = execute_flow(state, flows[k], task);

    SegmentResult& seg = report.segment_results[k];
    seg.executed = true;
    seg.success = trace.success;
    seg.delta1_tick = trace.delta1_tick;
    seg.delta2_tick = trace.delta2_tick;
    if (!seg.success && !report.failing_index) {
      report.failing_index = static_cast<int>(k);
    }

    state = trace.steps.empty() ? state : trace.steps.back().post_state;

    if (k + 1 < plan.subtasks.size()) {
      const bool match = check_boundary(task.goal, plan.subtasks[k + 1].init, state);
      report.transfer_results.push_back(match);
      if (!match && !report.failing_index) {
        report.failing_index = static_cast<int>(k);
      }
      state = apply_transfer(state, plan.transfers[k]);
    }
  }

  const bool all_segments =
      std::all_of(report.segment_results.begin(), report.segment_results.end(),
                  [](const SegmentResult& s) { return s.success; });
  const bool all_transfers = std::all_of(report.transfer_results.begin(),
                                         report.transfer_results.end(), [](bool b) { return b; });
  report.feasible = all_segments && all_transfers;
  return report;
}

}  // namespace taskworld
