// Acceptance suite: one check per release criterion, one PASS/FAIL line each.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "taskworld/bddl.hpp"
#include "taskworld/bench.hpp"
#include "taskworld/evolve.hpp"
#include "taskworld/graph.hpp"
#include "taskworld/metrics.hpp"
#include "taskworld/observe.hpp"
#include "taskworld/taskgen.hpp"
#include "taskworld/wire.hpp"
#include "taskworld/world.hpp"

using namespace taskworld;
using nlohmann::json;

namespace {

std::string fixture(const std::string& name) {
  return std::string(TASKWORLD_FIXTURE_DIR) + "/" + name;
}

struct Check {
  std::string label;
  std::function<void(std::ostringstream&)> body;  // throws on failure
};

#define REQUIRE_TRUE(cond)                                                       \
  do {                                                                           \
    if (!(cond)) throw std::runtime_error("check failed: " #cond);               \
  } while (0)

#define REQUIRE_EQ(a, b)                                                          \
  do {                                                                            \
    if (!((a) == (b))) {                                                          \
      std::ostringstream os_;                                                     \
      os_ << "mismatch: " << #a << " vs " << #b;                                  \
      throw std::runtime_error(os_.str());                                        \
    }                                                                             \
  } while (0)

GenerationBundle bundle_for(const std::string& scene_file, const std::string& keyword) {
  const SceneConfig scene = load_scene(fixture(scene_file));
  TemplatePlanner planner;
  return generate(TaskKeyword{keyword, scene.scene_id}, scene, planner);
}

WorldState episode_world(const std::string& scene_file, const GenerationBundle& bundle,
                         FaultSpec faults = {}) {
  const SceneConfig scene = load_scene(fixture(scene_file));
  auto scaled = std::make_shared<const SceneConfig>(apply_scales(scene, bundle.scales));
  return make_world(scaled, RobotConfig{}, std::move(faults),
                    bundle.plan.subtasks.front().target);
}

WorldState chain_to(const std::string& scene_file, const GenerationBundle& bundle, size_t k,
                    FaultSpec faults = {}) {
  WorldState world = episode_world(scene_file, bundle, std::move(faults));
  for (size_t i = 0; i < k; ++i) {
    const ExecutionTrace trace = execute_flow(world, bundle.flows[i], bundle.plan.subtasks[i]);
    if (!trace.success) throw std::runtime_error("prefix subtask failed unexpectedly");
    world = apply_transfer(trace.steps.back().post_state, bundle.plan.transfers[i]);
  }
  return world;
}

// --------------------------------------------------------------------------
// C1: wire-codec fixtures

void check_wire_codec(std::ostringstream&) {
  const char* fixtures[] = {
      R"([18, {"15":0.3}, {"13":0.45}, 5])",
      R"([18, {"15":0.3}, {"13":0.45}, {"9":0.2}, {"8":0.3}, 5])",
      R"([17, 1, 2, 3, {"19":[0.0,0.6]}, {"9":0.1}, 5])",
  };
  for (const char* text : fixtures) {
    const json canonical = json::parse(text);
    const ActionFlow flow = decode_flow(canonical);
    REQUIRE_EQ(encode_flow(flow).dump(), canonical.dump());
    // Stability under a second round.
    REQUIRE_EQ(encode_flow(decode_flow(encode_flow(flow))).dump(), canonical.dump());
  }
}

// --------------------------------------------------------------------------
// C2: the twelve initial-flow rows

void check_initial_flows(std::ostringstream& note) {
  struct Row {
    const char* scene;
    const char* keyword;
    std::vector<const char*> flows;
  };
  const Row rows[] = {
      {"t1.json",
       "put glass into fridge",
       {"APPROACH -> CONVERGE -> GRASP -> ARTICULATE_OPEN -> UNGRASP",
        "NAVIGATE_TO_TARGET -> APPROACH -> CONVERGE -> GRASP -> LIFT_EEF_UP(0.2)",
        "NAVIGATE_TO_SUPPORT -> MOVE_BASE_FORWARD(0.4) -> MOVE_EEF_FORWARD(0.1) -> UNGRASP",
        "NAVIGATE_TO_TARGET -> APPROACH -> CONVERGE -> GRASP -> ARTICULATE_CLOSE(0.0, 0.5) -> "
        "UNGRASP"}},
      {"t2.json",
       "put apple into fridge",
       {"APPROACH -> CONVERGE -> GRASP -> ARTICULATE_OPEN(0.0, 0.7) -> UNGRASP -> RETREAT",
        "NAVIGATE_TO_TARGET -> RETREAT -> APPROACH -> CONVERGE -> GRASP -> LIFT_EEF_UP(0.2)",
        "NAVIGATE_TO_SUPPORT -> MOVE_BASE_FORWARD(0.4) -> MOVE_EEF_FORWARD(0.1) -> UNGRASP",
        "NAVIGATE_TO_TARGET -> APPROACH -> CONVERGE -> GRASP -> ARTICULATE_CLOSE(0.0, 0.7) -> "
        "UNGRASP"}},
      {"t3.json",
       "transfer apple into bowl",
       {"APPROACH -> CONVERGE -> GRASP -> LIFT_EEF_UP(0.2)",
        "NAVIGATE_TO_SUPPORT -> MOVE_BASE_FORWARD(0.4) -> MOVE_EEF_FORWARD(0.1) -> "
        "LIFT_EEF_DOWN(0.3) -> UNGRASP"}},
      {"t4.json",
       "put glass onto table",
       {"APPROACH -> CONVERGE -> GRASP -> LIFT_EEF_UP(0.2)",
        "NAVIGATE_TO_SUPPORT -> MOVE_BASE_FORWARD(0.4) -> MOVE_EEF_FORWARD(0.1) -> "
        "LIFT_EEF_DOWN(0.3) -> UNGRASP"}},
  };
  int matched = 0;
  for (const Row& row : rows) {
    const GenerationBundle bundle = bundle_for(row.scene, row.keyword);
    REQUIRE_EQ(bundle.flows.size(), row.flows.size());
    for (size_t k = 0; k < row.flows.size(); ++k) {
      REQUIRE_EQ(flow_to_string(bundle.flows[k]), std::string(row.flows[k]));
      ++matched;
    }
  }
  note << matched << "/12 rows";
}

// --------------------------------------------------------------------------
// C3: the twelve BDDL rows

void check_bddl_rows(std::ostringstream& note) {
  struct Row {
    const char* scene;
    const char* keyword;
    std::vector<std::pair<const char*, const char*>> states;  // init, goal
  };
  const Row rows[] = {
      {"t1.json",
       "put glass into fridge",
       {{"(not (open refrigerator_0))", "(open refrigerator_0)"},
        {"(ontop glass_0 table_0)", "(not (ontop glass_0 table_0))"},
        {"(inside glass_0 gripper)", "(inside glass_0 refrigerator_0)"},
        {"(open refrigerator_0)", "(not (open refrigerator_0))"}}},
      {"t2.json",
       "put apple into fridge",
       {{"(not (open refrigerator_0))", "(open refrigerator_0)"},
        {"(ontop apple_0 table_0)", "(not (ontop apple_0 table_0))"},
        {"(inside apple_0 gripper)", "(inside apple_0 refrigerator_0)"},
        {"(open refrigerator_0)", "(not (open refrigerator_0))"}}},
      {"t3.json",
       "transfer apple into bowl",
       {{"(ontop apple_0 cabinet_0)", "(not (ontop apple_0 cabinet_0))"},
        {"(inside apple_0 gripper)", "(inside apple_0 bowl_0)"}}},
      {"t4.json",
       "put glass onto table",
       {{"(ontop glass_0 cabinet_0)", "(not (ontop glass_0 cabinet_0))"},
        {"(inside glass_0 gripper)", "(ontop glass_0 table_0)"}}},
  };
  int matched = 0;
  for (const Row& row : rows) {
    const GenerationBundle bundle = bundle_for(row.scene, row.keyword);
    REQUIRE_EQ(bundle.plan.subtasks.size(), row.states.size());
    for (size_t k = 0; k < row.states.size(); ++k) {
      const SimpleTask& subtask = bundle.plan.subtasks[k];
      REQUIRE_EQ(conjunction_to_string(subtask.init), std::string(row.states[k].first));
      REQUIRE_EQ(conjunction_to_string(subtask.goal), std::string(row.states[k].second));
      const BddlDocument doc = parse_bddl(emit_bddl(subtask));
      REQUIRE_TRUE(doc.init == subtask.init);
      REQUIRE_TRUE(doc.goal == subtask.goal);
      ++matched;
    }
  }
  note << matched << "/12 rows";
}

// --------------------------------------------------------------------------
// C4: scale rule

void check_scale_rule(std::ostringstream&) {
  const RobotConfig robot;
  for (const char* category :
       {"refrigerator", "cabinet", "microwave", "oven", "drawer", "dishwasher", "table"}) {
    ObjectSpec spec;
    spec.id = std::string(category) + "_0";
    spec.category = category;
    spec.object_class = classify_object(category);
    spec.bbox_extents = {1.2, 0.9, 1.5};
    REQUIRE_EQ(adjust_object_scale(spec, robot), 1.0);
  }

  std::mt19937 rng(424242);
  std::uniform_real_distribution<double> dist(0.0601, 0.5);
  for (int i = 0; i < 1000; ++i) {
    const double d = dist(rng);
    ObjectSpec spec;
    spec.id = "bottle_0";
    spec.category = "bottle";
    spec.object_class = ObjectClass::ManipulableB;
    spec.bbox_extents = {d, d + 0.01, 0.25};
    const double s = adjust_object_scale(spec, robot);
    const double post = s * d;
    REQUIRE_TRUE(post >= 0.044 && post <= 0.056);
  }

  ObjectSpec glass;
  glass.id = "glass_0";
  glass.category = "glass";
  glass.object_class = ObjectClass::ManipulableB;
  glass.bbox_extents = {0.135, 0.135, 0.2};
  REQUIRE_TRUE(std::abs(adjust_object_scale(glass, robot) - 0.37) < 1e-12);
}

// --------------------------------------------------------------------------
// C5: frame-invariance property

PrimitiveAction random_primitive(std::mt19937& rng) {
  std::uniform_int_distribution<size_t> pick(0, kPrimitiveTable.size() - 1);
  const PrimitiveInfo& info = kPrimitiveTable[pick(rng)];
  std::uniform_real_distribution<double> meters(0.05, 0.3);
  std::uniform_real_distribution<double> degrees(5.0, 60.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  switch (info.shape) {
    case ParamShape::None:
      return PrimitiveAction::make(info.kind);
    case ParamShape::ScalarMeters:
      return PrimitiveAction::make(info.kind, meters(rng));
    case ParamShape::ScalarDegrees:
      return PrimitiveAction::make(info.kind, degrees(rng));
    case ParamShape::Range: {
      double a = unit(rng), b = unit(rng);
      if (a > b) std::swap(a, b);
      return PrimitiveAction::make(info.kind, a, b);
    }
  }
  return PrimitiveAction::make(PrimitiveKind::Retreat);
}

void check_frame_invariance(std::ostringstream& note) {
  struct Setup {
    const char* scene;
    SimpleTask task;
  };
  auto make_task = [](const char* target, const char* s1, const char* s2) {
    SimpleTask task;
    task.name = std::string("prop_") + target;
    task.target = target;
    task.support_init = s1;
    task.support_goal = s2;
    task.init = {Predicate::on_top(target, s1)};
    task.goal = {Predicate::inside(target, s2)};
    task.bddl_category = "prop";
    return task;
  };
  std::vector<Setup> setups;
  setups.push_back({"prop_a.json", make_task("glass_0", "table_0", "bowl_0")});
  setups.push_back({"prop_b.json", make_task("apple_0", "table_0", "bowl_0")});

  std::mt19937 rng(20250808);
  std::uniform_int_distribution<int> length(2, 8);
  const RobotConfig robot;

  int executed = 0, exempt = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const Setup& setup = setups[static_cast<size_t>(trial) % setups.size()];
    SceneConfig scene = load_scene(fixture(setup.scene));
    std::map<std::string, double> scales;
    for (const auto& obj : scene.objects) {
      scales[obj.id] = adjust_object_scale(obj, robot);
    }
    auto scaled = std::make_shared<const SceneConfig>(apply_scales(scene, scales));
    const WorldState world = make_world(scaled, robot, FaultSpec{}, setup.task.target);

    ActionFlow flow;
    const int n = length(rng);
    for (int i = 0; i < n; ++i) flow.push_back(random_primitive(rng));

    const ExecutionTrace trace = execute_flow(world, flow, setup.task);
    ++executed;
    if (trace.has_collision_events()) {
      ++exempt;
      continue;
    }
    const std::set<std::string> allowed = {setup.task.target,  *setup.task.support_init,
                                           *setup.task.support_goal, kGripperAtom,
                                           kRobotAtom};
    for (const auto& [a, b] : trace.changed_pairs) {
      if (!allowed.count(a) || !allowed.count(b)) {
        throw std::runtime_error("frame invariance violated by pair (" + a + ", " + b + ")");
      }
    }
  }
  REQUIRE_TRUE(executed >= 500);
  note << executed << " flows, " << exempt << " collision-exempt, 0 violations";
}

// --------------------------------------------------------------------------
// C6: transfer identity

void check_transfer_identity(std::ostringstream&) {
  std::mt19937 rng(1618);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const char* scenes[] = {"t1.json", "t3.json", "prop_a.json"};

  for (int trial = 0; trial < 1000; ++trial) {
    const SceneConfig scene = load_scene(fixture(scenes[trial % 3]));
    auto shared = std::make_shared<const SceneConfig>(scene);
    WorldState world = make_world(shared);
    world.base_x = 0.5 + unit(rng) * (scene.floor_extent.width - 1.0);
    world.base_y = 0.5 + unit(rng) * (scene.floor_extent.height - 1.0);
    world.heading = unit(rng) * 2 * M_PI;
    world.tick = static_cast<long>(unit(rng) * 500);
    for (auto& [id, fraction] : world.joint_fractions) fraction = unit(rng);

    std::uniform_int_distribution<size_t> pick(0, scene.objects.size() - 1);
    const std::string prev = scene.objects[pick(rng)].id;
    const std::string next = scene.objects[pick(rng)].id;
    const ActionTransfer transfer{prev, next, PrimitiveKind::Ungrasp,
                                  PrimitiveKind::NavigateToTarget};

    const PredicateSnapshot before = snapshot_predicates(world);
    const WorldState after = apply_transfer(world, transfer);
    REQUIRE_EQ(after.tick, world.tick + 1);
    const PredicateSnapshot post = snapshot_predicates(after);
    REQUIRE_EQ(before.size(), post.size());
    for (size_t i = 0; i < before.size(); ++i) {
      REQUIRE_TRUE(before[i].second == post[i].second);
    }
  }
}

// --------------------------------------------------------------------------
// C7: reachability composition

void check_reachability_composition(std::ostringstream& note) {
  struct Case {
    const char* scene;
    const char* keyword;
    size_t corrupt_subtask;  // init of this subtask gets negated
    int expected_failing_index;
  };
  const Case cases[] = {
      {"t1.json", "put glass into fridge", 2, 1},
      {"t2.json", "put apple into fridge", 1, 0},
      {"t3.json", "transfer apple into bowl", 1, 0},
      {"t4.json", "put glass onto table", 1, 0},
  };
  int passed = 0;
  for (const Case& c : cases) {
    const SceneConfig scene = load_scene(fixture(c.scene));
    GenerationBundle bundle = bundle_for(c.scene, c.keyword);
    const SceneConfig scaled = apply_scales(scene, bundle.scales);

    const ReachabilityReport ok = check_reachability(scaled, bundle.plan, bundle.flows);
    REQUIRE_TRUE(ok.feasible);
    REQUIRE_TRUE(!ok.failing_index.has_value());
    ++passed;

    GenerationBundle corrupted = bundle;
    for (auto& p : corrupted.plan.subtasks[c.corrupt_subtask].init) p = p.negate();
    const ReachabilityReport bad = check_reachability(scaled, corrupted.plan, corrupted.flows);
    REQUIRE_TRUE(!bad.feasible);
    REQUIRE_TRUE(bad.failing_index.has_value());
    REQUIRE_EQ(*bad.failing_index, c.expected_failing_index);
    ++passed;
  }
  note << passed << "/8 cases";
}

// --------------------------------------------------------------------------
// C8: closed-loop refinement scenarios

void check_evolution(std::ostringstream& note) {
  OracleCritic critic;
  const EvolutionConfig config;  // tau_max = 5

  // (a) Door-collision scenario: converge with the side-step repair.
  {
    const GenerationBundle bundle = bundle_for("t1_blocked.json", "put glass into fridge");
    FaultSpec faults;
    faults.support_standoff_extra = 0.3;
    const WorldState entry = chain_to("t1_blocked.json", bundle, 2, faults);
    const EvolutionHistory history =
        evolve_subtask(entry, bundle.plan.subtasks[2], bundle.flows[2], config, critic);
    REQUIRE_TRUE(history.succeeded());
    REQUIRE_TRUE(history.iterations_used() <= 5);
    bool has_side_step = false;
    for (const auto& action : history.records.back().flow) {
      has_side_step |= action.kind == PrimitiveKind::MoveBaseLeft;
    }
    REQUIRE_TRUE(has_side_step);
    note << "door rescue in " << history.iterations_used() << " iteration(s)";
  }

  // (b) An initially successful subtask exits at iteration 0.
  {
    const GenerationBundle bundle = bundle_for("t3.json", "transfer apple into bowl");
    const WorldState world = episode_world("t3.json", bundle);
    const EvolutionHistory history =
        evolve_subtask(world, bundle.plan.subtasks[0], bundle.flows[0], config, critic);
    REQUIRE_TRUE(history.succeeded());
    REQUIRE_EQ(history.records.size(), static_cast<size_t>(1));
    REQUIRE_EQ(history.iterations_used(), 0);
  }

  // (c) A welded target exhausts the budget after exactly tau_max rounds.
  {
    const GenerationBundle bundle = bundle_for("t2.json", "put apple into fridge");
    FaultSpec faults;
    faults.welded_targets.insert("apple_0");
    const WorldState entry = chain_to("t2.json", bundle, 1, faults);
    const EvolutionHistory history =
        evolve_subtask(entry, bundle.plan.subtasks[1], bundle.flows[1], config, critic);
    REQUIRE_TRUE(!history.succeeded());
    REQUIRE_TRUE(history.outcome == EvolutionOutcome::ExhaustedBudget);
    REQUIRE_EQ(history.records.size(), static_cast<size_t>(config.tau_max + 1));
  }

  // (d) Reruns are byte-identical.
  {
    const GenerationBundle bundle = bundle_for("t1_blocked.json", "put glass into fridge");
    const WorldState entry = chain_to("t1_blocked.json", bundle, 2);
    const EvolutionHistory a =
        evolve_subtask(entry, bundle.plan.subtasks[2], bundle.flows[2], config, critic);
    const EvolutionHistory b =
        evolve_subtask(entry, bundle.plan.subtasks[2], bundle.flows[2], config, critic);
    REQUIRE_EQ(a.to_json().dump(), b.to_json().dump());
  }
}

// --------------------------------------------------------------------------
// C9: downsampling

void check_downsampling(std::ostringstream&) {
  for (int n = 1; n <= 40; ++n) {
    const std::vector<int> got = downsample_indices(n, 6);
    // Exhaustive oracle: exact rational rounding.
    std::vector<int> want;
    if (n <= 6) {
      for (int i = 0; i < n; ++i) want.push_back(i);
    } else {
      for (int i = 0; i < 6; ++i) {
        const long p = static_cast<long>(i) * (n - 1), q = 5;
        want.push_back(static_cast<int>((2 * p + q) / (2 * q)));
      }
    }
    REQUIRE_TRUE(got == want);
    REQUIRE_EQ(got.size(), static_cast<size_t>(std::min(n, 6)));
    REQUIRE_EQ(got.front(), 0);
    REQUIRE_EQ(got.back(), n - 1);
    for (size_t i = 1; i < got.size(); ++i) REQUIRE_TRUE(got[i] > got[i - 1]);
  }
}

// --------------------------------------------------------------------------
// C10: metrics

void check_metrics(std::ostringstream&) {
  std::vector<EpisodeResult> results;
  for (int i = 0; i < 102; ++i) {
    EpisodeResult r;
    r.scenario_id = "s" + std::to_string(i);
    r.task_name = "atomic";
    r.subtasks.push_back({i < 73, 0, false});
    r.complete_success = i < 73;
    results.push_back(std::move(r));
  }
  const MetricTable table = summarize(results);
  REQUIRE_EQ(format_metric(table.overall_sr()), std::string("71.6"));

  // No iteration-0 failures: ESR renders as the dash.
  const CellStats& cell = table.categories.at("atomic").subtask_cells[0];
  REQUIRE_TRUE(cell.initial_failures == 29);  // the failures themselves
  std::vector<EpisodeResult> clean{results.begin(), results.begin() + 73};
  const MetricTable clean_table = summarize(clean);
  REQUIRE_EQ(format_metric(clean_table.categories.at("atomic").subtask_cells[0].esr()),
             std::string("—"));

  // Merge associativity over random partitions.
  std::mt19937 rng(55);
  std::uniform_int_distribution<size_t> cut(1, results.size() - 1);
  for (int trial = 0; trial < 100; ++trial) {
    const size_t k = cut(rng);
    const MetricTable merged =
        merge(summarize({results.begin(), results.begin() + static_cast<long>(k)}),
              summarize({results.begin() + static_cast<long>(k), results.end()}));
    REQUIRE_EQ(merged.to_json().dump(), table.to_json().dump());
  }
}

// --------------------------------------------------------------------------
// C11: desk-scale bench

void check_bench(std::ostringstream& note) {
  const std::vector<Scenario> scenarios = load_manifest(fixture("desk_manifest.json"));
  REQUIRE_EQ(scenarios.size(), static_cast<size_t>(12));

  const auto t0 = std::chrono::steady_clock::now();
  const auto artifacts = run_bench(
      scenarios, [] { return std::make_unique<TemplatePlanner>(); },
      [] { return std::make_unique<OracleCritic>(); }, EvolutionConfig{}, 1);
  const double single_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::vector<EpisodeResult> results;
  for (const auto& a : artifacts) results.push_back(a.result);
  const MetricTable table = summarize(results);
  REQUIRE_TRUE(table.overall_sr().has_value());
  REQUIRE_TRUE(*table.overall_sr() >= 75.0);
  REQUIRE_TRUE(single_s < 120.0);

  const std::string rendered = render_table(table);
  REQUIRE_TRUE(rendered.find("Subtask 1") != std::string::npos);
  REQUIRE_TRUE(rendered.find("Complete") != std::string::npos);
  REQUIRE_TRUE(rendered.find("Overall SR") != std::string::npos);

  // Parallel run: identical outcomes, comfortably inside the budget.
  const auto t1 = std::chrono::steady_clock::now();
  const auto parallel = run_bench(
      scenarios, [] { return std::make_unique<TemplatePlanner>(); },
      [] { return std::make_unique<OracleCritic>(); }, EvolutionConfig{}, 4);
  const double parallel_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();
  REQUIRE_TRUE(parallel_s < 40.0);
  std::vector<EpisodeResult> parallel_results;
  for (const auto& a : parallel) parallel_results.push_back(a.result);
  REQUIRE_EQ(summarize(parallel_results).to_json().dump(), table.to_json().dump());

  note << table.total_successes << "/" << table.total_episodes << " episodes, SR "
       << format_metric(table.overall_sr()) << "%, " << single_s << "s single / " << parallel_s
       << "s x4";
}

}  // namespace

int main() {
  const std::vector<Check> checks = {
      {"C1  wire-codec fixtures byte-equal", check_wire_codec},
      {"C2  initial-flow fixtures (12 rows)", check_initial_flows},
      {"C3  BDDL fixtures (12 rows, parse/emit identity)", check_bddl_rows},
      {"C4  scale rule (fixtures 1.0, 1000 randomized, 0.37 anchor)", check_scale_rule},
      {"C5  frame-invariance property (>=500 randomized flows)", check_frame_invariance},
      {"C6  transfer identity (1000 randomized transfers)", check_transfer_identity},
      {"C7  reachability composition (4 feasible + 4 corrupted)",
       check_reachability_composition},
      {"C8  closed-loop refinement scenarios (a-d)", check_evolution},
      {"C9  downsampling vs exhaustive oracle (n=1..40)", check_downsampling},
      {"C10 metrics (71.6 anchor, dash, merge associativity)", check_metrics},
      {"C11 desk-scale bench (12 scenarios, SR >= 75)", check_bench},
  };

  int failures = 0;
  for (const Check& check : checks) {
    const auto start = std::chrono::steady_clock::now();
    std::ostringstream note;
    try {
      check.body(note);
      const double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      std::printf("[PASS] %s (%.2fs)%s%s\n", check.label.c_str(), seconds,
                  note.str().empty() ? "" : " — ", note.str().c_str());
    } catch (const std::exception& e) {
      const double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      std::printf("[FAIL] %s (%.2fs): %s\n", check.label.c_str(), seconds, e.what());
      ++failures;
    }
  }
  if (failures == 0) {
    std::printf("all %zu acceptance criteria passed\n", checks.size());
  } else {
    std::printf("%d acceptance criteria FAILED\n", failures);
  }
  return failures;
}
