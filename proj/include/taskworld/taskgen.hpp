#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "taskworld/remote.hpp"
#include "taskworld/scene.hpp"
#include "taskworld/task.hpp"

namespace taskworld {

struct ExpandResult {
  std::string name;    // task_activity_name, underscore-joined
  std::string detail;  // task_detail_message
};

// Stage-II output: one entry per subtask, ids resolved against the scene.
struct SubtaskConfig {
  std::string name;  // template-recognizable prefix: open_/pick_up_/put_/close_
  std::string description;
  std::string target_id;
  std::optional<std::string> support_init_id;
  std::optional<std::string> support_goal_id;
  std::string bddl_category;
};

class Planner {
 public:
  virtual ~Planner() = default;
  virtual ExpandResult expand(const TaskKeyword& keyword, const SceneConfig& scene) = 0;
  virtual std::vector<SubtaskConfig> decompose(const std::string& name,
                                               const std::string& detail,
                                               const SceneConfig& scene) = 0;
};

// Deterministic planner covering the three primary task families:
// put/place/transport/transfer X into|onto Y, pick up X, open/close F.
// Pure function of (keyword, scene inventory); repeated calls are
// byte-identical.
class TemplatePlanner : public Planner {
 public:
  ExpandResult expand(const TaskKeyword& keyword, const SceneConfig& scene) override;
  std::vector<SubtaskConfig> decompose(const std::string& name, const std::string& detail,
                                       const SceneConfig& scene) override;
};

// Client for an external planning endpoint (AGT_PLANNER_URL /
// AGT_PLANNER_TOKEN). Responses are validated, never repaired.
class RemotePlanner : public Planner {
 public:
  explicit RemotePlanner(RemoteEndpoint endpoint) : endpoint_(std::move(endpoint)) {}

  ExpandResult expand(const TaskKeyword& keyword, const SceneConfig& scene) override;
  std::vector<SubtaskConfig> decompose(const std::string& name, const std::string& detail,
                                       const SceneConfig& scene) override;

 private:
  RemoteEndpoint endpoint_;
};

// Stage I with post-validation: the name's id-shaped tokens must resolve.
ExpandResult expand(const TaskKeyword& keyword, const SceneConfig& scene, Planner& planner);

// Stage II: planner configs -> validated ComplexTask with boundary
// predicates, navigation flags and transfers filled in.
ComplexTask decompose(const std::string& name, const std::string& detail,
                      const SceneConfig& scene, Planner& planner);

// Builds one SimpleTask from a stage-II config (boundary predicates derived
// from the subtask name pattern). Throws InvalidDecomposition.
SimpleTask instantiate_subtask(const SubtaskConfig& config, const SceneConfig& scene);

// Stage-III flow templates keyed by goal-predicate shape and support class.
// Throws NoTemplate for uncovered shapes.
ActionFlow plan_initial_flow(const SimpleTask& subtask, const SceneConfig& scene);

struct GenerationBundle {
  ComplexTask plan;
  std::vector<ActionFlow> flows;
  std::map<std::string, double> scales;  // first-occurrence rule over subtask targets
};

// Full Stage I-III composition. The first subtask's init conjunction is
// checked against the actual scene snapshot; a mismatch is a hard error.
GenerationBundle generate(const TaskKeyword& keyword, const SceneConfig& scene,
                          Planner& planner,
                          ScaleRounding rounding = ScaleRounding::TwoDecimals);

// Surface an object currently rests on, if any (used to fill o_s1 for picks).
std::optional<std::string> resting_surface(const SceneConfig& scene, const std::string& id);

}  // namespace taskworld
