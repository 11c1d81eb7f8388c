#pragma once

#include <memory>
#include <string>

#include "taskworld/scene.hpp"
#include "taskworld/taskgen.hpp"
#include "taskworld/world.hpp"

namespace twtest {

inline std::string fixture_path(const std::string& name) {
  return std::string(TASKWORLD_FIXTURE_DIR) + "/" + name;
}

inline taskworld::SceneConfig load_fixture(const std::string& name) {
  return taskworld::load_scene(fixture_path(name));
}

// Generation bundle for a fixture + keyword with the template planner.
inline taskworld::GenerationBundle make_bundle(const taskworld::SceneConfig& scene,
                                               const std::string& keyword) {
  taskworld::TemplatePlanner planner;
  return taskworld::generate(taskworld::TaskKeyword{keyword, scene.scene_id}, scene, planner);
}

// Scaled world ready for execution, robot spawned at the first target.
inline taskworld::WorldState make_episode_world(const taskworld::SceneConfig& scene,
                                                const taskworld::GenerationBundle& bundle,
                                                taskworld::FaultSpec faults = {}) {
  auto scaled = std::make_shared<const taskworld::SceneConfig>(
      taskworld::apply_scales(scene, bundle.scales));
  return taskworld::make_world(scaled, taskworld::RobotConfig{}, std::move(faults),
                               bundle.plan.subtasks.front().target);
}

}  // namespace twtest
