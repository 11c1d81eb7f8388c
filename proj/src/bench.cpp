#include "taskworld/bench.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace taskworld {

using nlohmann::json;

std::vector<Scenario> load_manifest(const std::string& path,
                                    const std::string& base_directory) {
  namespace fs = std::filesystem;
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open manifest '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();

  json doc;
  try {
    doc = json::parse(ss.str());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("manifest: ") + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorCode::ParseError, "manifest must be a JSON array");

  const fs::path base =
      base_directory.empty() ? fs::path(path).parent_path() : fs::path(base_directory);

  std::vector<Scenario> scenarios;
  for (size_t i = 0; i < doc.size(); ++i) {
    const json& entry = doc[i];
    Scenario s;
    s.id = entry.value("id", "scenario_" + std::to_string(i));
    s.scene_path = entry.at("scene").get<std::string>();
    if (!fs::path(s.scene_path).is_absolute()) {
      s.scene_path = (base / s.scene_path).string();
    }
    s.keyword = entry.at("keyword").get<std::string>();
    if (entry.contains("faults") && entry.at("faults").is_object()) {
      const json& faults = entry.at("faults");
      if (faults.contains("welded_target") && !faults.at("welded_target").is_null()) {
        s.faults.welded_targets.insert(faults.at("welded_target").get<std::string>());
      }
      s.faults.support_standoff_extra = faults.value("support_standoff_extra", 0.0);
    }
    scenarios.push_back(std::move(s));
  }
  return scenarios;
}

EpisodeArtifacts run_episode(const Scenario& scenario, Planner& planner, Critic& critic,
                             const EvolutionConfig& config) {
  EpisodeArtifacts artifacts;
  artifacts.result.scenario_id = scenario.id;
  artifacts.result.task_name = scenario.keyword;

  try {
    const SceneConfig raw_scene = load_scene(scenario.scene_path);
    const GenerationBundle bundle =
        generate(TaskKeyword{scenario.keyword, raw_scene.scene_id}, raw_scene, planner);
    artifacts.result.task_name = bundle.plan.name;

    const SceneConfig scaled = apply_scales(raw_scene, bundle.scales);
    auto scene = std::make_shared<const SceneConfig>(scaled);
    WorldState world =
        make_world(scene, RobotConfig{}, scenario.faults, bundle.plan.subtasks.front().target);

    const ComplexEvolutionResult evolution =
        evolve_complex(world, bundle.plan, bundle.flows, config, critic);
    artifacts.histories = evolution.histories;

    // Only attempted subtasks enter the per-position denominators; a stopped
    // chain leaves the tail unattempted.
    int total_iterations = 0;
    for (const EvolutionHistory& h : evolution.histories) {
      SubtaskOutcome outcome;
      outcome.succeeded = h.succeeded();
      outcome.iterations_used = h.iterations_used();
      outcome.rescued = h.rescued();
      total_iterations += outcome.iterations_used;
      artifacts.result.subtasks.push_back(outcome);
    }
    artifacts.result.complete_success = evolution.overall_success;
    artifacts.result.total_iterations = total_iterations;
  } catch (const std::exception& e) {
    // Batch isolation: a broken episode is a recorded failure, not an abort.
    artifacts.result.complete_success = false;
    artifacts.result.error = e.what();
  }
  return artifacts;
}

std::vector<EpisodeArtifacts> run_bench(
    const std::vector<Scenario>& scenarios,
    const std::function<std::unique_ptr<Planner>()>& planner_factory,
    const std::function<std::unique_ptr<Critic>()>& critic_factory,
    const EvolutionConfig& config, int jobs) {
  std::vector<EpisodeArtifacts> out(scenarios.size());
  if (scenarios.empty()) return out;

  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(scenarios.size())));
  std::atomic<size_t> next{0};

  auto work = [&] {
    auto planner = planner_factory();
    auto critic = critic_factory();
    while (true) {
      const size_t index = next.fetch_add(1);
      if (index >= scenarios.size()) break;
      out[index] = run_episode(scenarios[index], *planner, *critic, config);
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return out;
}

}  // namespace taskworld
