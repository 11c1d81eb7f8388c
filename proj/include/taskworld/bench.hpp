#pragma once

#include <functional>
#include <string>
#include <vector>

#include "taskworld/evolve.hpp"
#include "taskworld/metrics.hpp"
#include "taskworld/taskgen.hpp"

namespace taskworld {

// One benchmark entry: a scene, a keyword, and optional deterministic fault
// injection reproducing failure narratives.
struct Scenario {
  std::string id;
  std::string scene_path;
  std::string keyword;
  FaultSpec faults;
};

// Manifest: JSON array of {"id", "scene", "keyword", "faults": {...}} with
// optional fault keys "welded_target" and "support_standoff_extra".
std::vector<Scenario> load_manifest(const std::string& path,
                                    const std::string& base_directory = {});

struct EpisodeArtifacts {
  EpisodeResult result;
  std::vector<EvolutionHistory> histories;
};

// Generates the bundle, applies the scale table, evolves every subtask and
// folds the outcome into an EpisodeResult. Episode errors are captured in
// the result, never thrown.
EpisodeArtifacts run_episode(const Scenario& scenario, Planner& planner, Critic& critic,
                             const EvolutionConfig& config);

// Runs the manifest with `jobs` worker threads (episodes are independent)
// and merges results in manifest order.
std::vector<EpisodeArtifacts> run_bench(const std::vector<Scenario>& scenarios,
                                        const std::function<std::unique_ptr<Planner>()>& planner_factory,
                                        const std::function<std::unique_ptr<Critic>()>& critic_factory,
                                        const EvolutionConfig& config, int jobs = 1);

}  // namespace taskworld
