#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "json.hpp"
#include "taskworld/bench.hpp"
#include "taskworld/bddl.hpp"
#include "taskworld/evolve.hpp"
#include "taskworld/graph.hpp"
#include "taskworld/metrics.hpp"
#include "taskworld/taskgen.hpp"
#include "taskworld/wire.hpp"

namespace tw = taskworld;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;
constexpr int kExitGeneration = 3;
constexpr int kExitRemote = 4;

int exit_code_for(const tw::Error& e) {
  switch (e.code()) {
    case tw::ErrorCode::IoError:
      return kExitIo;
    case tw::ErrorCode::NoTemplate:
    case tw::ErrorCode::InvalidDecomposition:
    case tw::ErrorCode::UnresolvedObject:
      return kExitGeneration;
    case tw::ErrorCode::PlannerUnavailable:
    case tw::ErrorCode::CriticUnavailable:
    case tw::ErrorCode::ConfigError:
      return kExitRemote;
    default:
      return kExitValidation;
  }
}

struct RemoteTuning {
  double timeout_seconds = 30.0;
  int max_retries = 2;
  int max_in_flight = 4;
};

RemoteTuning load_remote_tuning(const std::string& path) {
  RemoteTuning tuning;
  if (path.empty()) return tuning;
  std::ifstream in(path);
  if (!in) throw tw::Error(tw::ErrorCode::IoError, "cannot open remote config '" + path + "'");
  json doc = json::parse(in, nullptr, true, true);
  tuning.timeout_seconds = doc.value("timeout_seconds", tuning.timeout_seconds);
  tuning.max_retries = doc.value("max_retries", tuning.max_retries);
  tuning.max_in_flight = doc.value("max_in_flight", tuning.max_in_flight);
  return tuning;
}

tw::RemoteEndpoint endpoint_with_tuning(const char* url_var, const char* token_var,
                                        const RemoteTuning& tuning) {
  tw::RemoteEndpoint ep = tw::endpoint_from_env(url_var, token_var);
  ep.timeout_seconds = tuning.timeout_seconds;
  ep.max_retries = tuning.max_retries;
  ep.max_in_flight = tuning.max_in_flight;
  return ep;
}

std::unique_ptr<tw::Planner> make_planner(const std::string& mode, const RemoteTuning& tuning) {
  if (mode == "template") return std::make_unique<tw::TemplatePlanner>();
  if (mode == "remote") {
    return std::make_unique<tw::RemotePlanner>(
        endpoint_with_tuning("AGT_PLANNER_URL", "AGT_PLANNER_TOKEN", tuning));
  }
  throw tw::Error(tw::ErrorCode::ConfigError, "planner must be template|remote");
}

std::unique_ptr<tw::Critic> make_critic(const std::string& mode, const RemoteTuning& tuning) {
  if (mode == "oracle") return std::make_unique<tw::OracleCritic>();
  if (mode == "remote") {
    return std::make_unique<tw::RemoteCritic>(
        endpoint_with_tuning("AGT_CRITIC_URL", "AGT_CRITIC_TOKEN", tuning));
  }
  throw tw::Error(tw::ErrorCode::ConfigError, "critic must be oracle|remote");
}

std::set<tw::ViewKind> parse_views(const std::string& spec) {
  std::set<tw::ViewKind> views;
  std::string current;
  auto flush = [&] {
    if (current.empty()) return;
    if (current == "global") {
      views.insert(tw::ViewKind::Global);
    } else if (current == "head") {
      views.insert(tw::ViewKind::Head);
    } else if (current == "wrist") {
      views.insert(tw::ViewKind::Wrist);
    } else {
      throw tw::Error(tw::ErrorCode::ConfigError, "unknown view '" + current + "'");
    }
    current.clear();
  };
  for (char c : spec) {
    if (c == ',') {
      flush();
    } else {
      current += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  flush();
  if (views.empty()) throw tw::Error(tw::ErrorCode::ConfigError, "views must be non-empty");
  return views;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw tw::Error(tw::ErrorCode::IoError, "cannot write '" + path.string() + "'");
  out << content;
}

json bundle_to_json(const tw::GenerationBundle& bundle) {
  json subtasks = json::array();
  for (const auto& t : bundle.plan.subtasks) {
    subtasks.push_back({{"name", t.name},
                        {"description", t.description},
                        {"target", t.target},
                        {"support_init", t.support_init ? json(*t.support_init) : json()},
                        {"support_goal", t.support_goal ? json(*t.support_goal) : json()},
                        {"bddl_category", t.bddl_category},
                        {"init", tw::conjunction_to_string(t.init)},
                        {"goal", tw::conjunction_to_string(t.goal)},
                        {"requires_navigation", t.requires_navigation}});
  }
  json transfers = json::array();
  for (const auto& e : bundle.plan.transfers) {
    transfers.push_back(
        {{"prev_target", e.prev_target},
         {"next_target", e.next_target},
         {"end_action", std::string(tw::primitive_info(e.end_action).name)},
         {"start_action", std::string(tw::primitive_info(e.start_action).name)}});
  }
  json flows = json::array();
  for (const auto& f : bundle.flows) flows.push_back(tw::encode_flow(f));
  return {{"task_activity_name", bundle.plan.name},
          {"task_detail_message", bundle.plan.detail},
          {"subtasks", std::move(subtasks)},
          {"transfers", std::move(transfers)},
          {"flows", std::move(flows)},
          {"scales", bundle.scales}};
}

void write_bundle(const tw::GenerationBundle& bundle, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  write_file(out_dir / "task.json", bundle_to_json(bundle).dump(2) + "\n");
  for (size_t k = 0; k < bundle.plan.subtasks.size(); ++k) {
    write_file(out_dir / ("subtask_" + std::to_string(k + 1) + ".bddl"),
               tw::emit_bddl(bundle.plan.subtasks[k]));
  }
  json flows = json::array();
  for (const auto& f : bundle.flows) flows.push_back(tw::encode_flow(f));
  write_file(out_dir / "flows.json", flows.dump(2) + "\n");
  write_file(out_dir / "scales.json", json(bundle.scales).dump(2) + "\n");
}

int cmd_validate(const std::string& scene_path) {
  if (!fs::exists(scene_path)) {
    std::cerr << "error: scene file '" << scene_path << "' does not exist\n";
    return kExitIo;
  }
  const tw::SceneConfig scene = tw::load_scene(scene_path);
  const tw::RobotConfig robot;
  std::cout << "scene " << scene.scene_id << ": " << scene.objects.size() << " objects, "
            << scene.rooms.size() << " room(s)\n";
  for (const auto& obj : scene.objects) {
    std::cout << "  " << obj.id << " (" << obj.category << ", class "
              << (obj.object_class == tw::ObjectClass::FixtureA ? "A" : "B")
              << ", scale " << tw::format_param(tw::adjust_object_scale(obj, robot)) << ")\n";
  }
  std::cout << "ok\n";
  return kExitOk;
}

struct CommonArgs {
  std::string scene_path;
  std::string keyword;
  std::string planner_mode = "template";
  std::string critic_mode = "oracle";
  std::string remote_config;
  std::string out_dir = "out";
  int tau_max = 5;
  int p1 = 1;
  std::string views = "global,head";
  bool raster = false;
  int jobs = 1;
  long seed = 0;
};

tw::EvolutionConfig evolution_config(const CommonArgs& args) {
  tw::EvolutionConfig config;
  config.tau_max = args.tau_max;
  config.p1 = args.p1;
  config.views = parse_views(args.views);
  config.raster_frames = args.raster;
  config.validate();
  return config;
}

void write_run_config(const CommonArgs& args, const fs::path& out_dir) {
  json j = {{"scene", args.scene_path},   {"keyword", args.keyword},
            {"planner", args.planner_mode}, {"critic", args.critic_mode},
            {"tau_max", args.tau_max},    {"p1", args.p1},
            {"views", args.views},        {"jobs", args.jobs},
            {"seed", args.seed}};
  write_file(out_dir / "run_config.json", j.dump(2) + "\n");
}

int cmd_generate(const CommonArgs& args) {
  const tw::SceneConfig scene = tw::load_scene(args.scene_path);
  const RemoteTuning tuning = load_remote_tuning(args.remote_config);
  auto planner = make_planner(args.planner_mode, tuning);
  const tw::GenerationBundle bundle =
      tw::generate(tw::TaskKeyword{args.keyword, scene.scene_id}, scene, *planner);
  write_bundle(bundle, args.out_dir);
  write_run_config(args, args.out_dir);
  std::cout << bundle.plan.name << ": " << bundle.plan.subtasks.size() << " subtask(s)\n";
  for (size_t k = 0; k < bundle.plan.subtasks.size(); ++k) {
    std::cout << "  " << k + 1 << ". " << bundle.plan.subtasks[k].name << ": "
              << tw::flow_to_string(bundle.flows[k]) << "\n";
  }
  return kExitOk;
}

int cmd_run(const CommonArgs& args) {
  const tw::SceneConfig scene = tw::load_scene(args.scene_path);
  const RemoteTuning tuning = load_remote_tuning(args.remote_config);
  auto planner = make_planner(args.planner_mode, tuning);
  const tw::GenerationBundle bundle =
      tw::generate(tw::TaskKeyword{args.keyword, scene.scene_id}, scene, *planner);
  write_bundle(bundle, args.out_dir);
  write_run_config(args, args.out_dir);

  const tw::ReachabilityReport report =
      tw::check_reachability(tw::apply_scales(scene, bundle.scales), bundle.plan, bundle.flows);
  write_file(fs::path(args.out_dir) / "reachability.json", report.to_json().dump(2) + "\n");

  // Open-loop execution with trace export.
  auto scaled = std::make_shared<const tw::SceneConfig>(tw::apply_scales(scene, bundle.scales));
  tw::WorldState world = tw::make_world(scaled, tw::RobotConfig{}, tw::FaultSpec{},
                                        bundle.plan.subtasks.front().target);
  for (size_t k = 0; k < bundle.plan.subtasks.size(); ++k) {
    const tw::ExecutionTrace trace =
        tw::execute_flow(world, bundle.flows[k], bundle.plan.subtasks[k]);
    write_file(fs::path(args.out_dir) / ("trace_" + std::to_string(k + 1) + ".jsonl"),
               tw::trace_to_jsonl(trace, scene.scene_id, bundle.plan.subtasks[k].name));
    std::cout << "subtask " << k + 1 << " (" << bundle.plan.subtasks[k].name
              << "): " << (trace.success ? "success" : "failure") << "\n";
    world = trace.steps.back().post_state;
    if (k + 1 < bundle.plan.subtasks.size()) {
      world = tw::apply_transfer(world, bundle.plan.transfers[k]);
    }
  }
  std::cout << (report.feasible ? "plan feasible" : "plan infeasible") << "\n";
  return kExitOk;
}

int cmd_evolve(const CommonArgs& args) {
  const tw::SceneConfig scene = tw::load_scene(args.scene_path);
  const RemoteTuning tuning = load_remote_tuning(args.remote_config);
  auto planner = make_planner(args.planner_mode, tuning);
  auto critic = make_critic(args.critic_mode, tuning);
  const tw::EvolutionConfig config = evolution_config(args);

  const tw::GenerationBundle bundle =
      tw::generate(tw::TaskKeyword{args.keyword, scene.scene_id}, scene, *planner);
  write_bundle(bundle, args.out_dir);
  write_run_config(args, args.out_dir);

  auto scaled = std::make_shared<const tw::SceneConfig>(tw::apply_scales(scene, bundle.scales));
  tw::WorldState world = tw::make_world(scaled, tw::RobotConfig{}, tw::FaultSpec{},
                                        bundle.plan.subtasks.front().target);
  const tw::ComplexEvolutionResult result =
      tw::evolve_complex(world, bundle.plan, bundle.flows, config, *critic);

  json histories = json::array();
  for (size_t k = 0; k < result.histories.size(); ++k) {
    const tw::EvolutionHistory& h = result.histories[k];
    histories.push_back(h.to_json());
    write_file(fs::path(args.out_dir) / ("evolution_" + std::to_string(k + 1) + ".jsonl"),
               tw::evolution_log_jsonl(h));
    std::cout << "subtask " << k + 1 << " (" << h.subtask_ref << "): "
              << (h.succeeded() ? "succeeded" : "exhausted budget") << " after "
              << h.iterations_used() << " evolution iteration(s)\n";
  }
  write_file(fs::path(args.out_dir) / "histories.json", histories.dump(2) + "\n");
  std::cout << (result.overall_success ? "task complete" : "task failed") << "\n";
  return kExitOk;
}

int cmd_bench(const CommonArgs& args, const std::string& manifest_path) {
  const RemoteTuning tuning = load_remote_tuning(args.remote_config);
  const tw::EvolutionConfig config = evolution_config(args);
  const std::vector<tw::Scenario> scenarios = tw::load_manifest(manifest_path);

  const auto artifacts = tw::run_bench(
      scenarios, [&] { return make_planner(args.planner_mode, tuning); },
      [&] { return make_critic(args.critic_mode, tuning); }, config, args.jobs);

  std::vector<tw::EpisodeResult> results;
  results.reserve(artifacts.size());
  for (const auto& a : artifacts) results.push_back(a.result);

  tw::persist(results, args.out_dir);
  write_run_config(args, args.out_dir);
  const tw::MetricTable table = tw::summarize(results);
  const std::string rendered = tw::render_table(table);
  write_file(fs::path(args.out_dir) / "summary.txt", rendered);
  std::cout << rendered;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Desk-scale task-world engine: scene validation, graph-based task "
               "generation, kinematic execution and closed-loop flow refinement"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string manifest_path;

  auto add_common = [&](CLI::App* cmd, bool needs_keyword) {
    cmd->add_option("--scene", args.scene_path, "scene JSON file")->required(needs_keyword);
    if (needs_keyword) {
      cmd->add_option("--keyword", args.keyword, "task keyword")->required();
    }
    cmd->add_option("--planner", args.planner_mode, "template|remote");
    cmd->add_option("--critic", args.critic_mode, "oracle|remote");
    cmd->add_option("--remote-config", args.remote_config,
                    "JSON file with timeout_seconds/max_retries/max_in_flight");
    cmd->add_option("--tau-max", args.tau_max, "evolution iteration budget");
    cmd->add_option("--p1", args.p1, "critic look-back window");
    cmd->add_option("--views", args.views, "comma list of global,head,wrist");
    cmd->add_flag("--raster", args.raster, "PGM occupancy frames instead of state summaries");
    cmd->add_option("--jobs", args.jobs, "parallel episodes");
    cmd->add_option("--seed", args.seed, "recorded in run_config.json");
    cmd->add_option("--out", args.out_dir, "output directory");
  };

  CLI::App* validate = app.add_subcommand("validate", "load and validate a scene file");
  validate->add_option("scene", args.scene_path, "scene JSON file")->required();

  CLI::App* generate = app.add_subcommand("generate", "emit the task bundle for a keyword");
  add_common(generate, true);

  CLI::App* run = app.add_subcommand("run", "generate and execute open-loop");
  add_common(run, true);

  CLI::App* evolve = app.add_subcommand("evolve", "generate and refine closed-loop");
  add_common(evolve, true);

  CLI::App* bench = app.add_subcommand("bench", "run a scenario manifest and aggregate metrics");
  add_common(bench, false);
  bench->add_option("--manifest", manifest_path, "scenario manifest JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(args.scene_path);
    if (generate->parsed()) return cmd_generate(args);
    if (run->parsed()) return cmd_run(args);
    if (evolve->parsed()) return cmd_evolve(args);
    if (bench->parsed()) return cmd_bench(args, manifest_path);
  } catch (const tw::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
