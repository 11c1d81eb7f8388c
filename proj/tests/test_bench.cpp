#include "doctest.h"
#include "taskworld/bench.hpp"
#include "test_util.hpp"

using namespace taskworld;

TEST_CASE("manifest entries resolve scenes relative to the manifest and carry faults") {
  const auto scenarios = load_manifest(twtest::fixture_path("desk_manifest.json"));
  REQUIRE(scenarios.size() == 12);
  CHECK(scenarios[0].id == "t1_clean");
  CHECK(scenarios[0].scene_path.find("t1.json") != std::string::npos);
  CHECK(scenarios[0].faults.welded_targets.empty());

  const Scenario& welded = scenarios[5];
  CHECK(welded.id == "t2_welded");
  CHECK(welded.faults.welded_targets.count("apple_0") == 1);
  const Scenario& far = scenarios[2];
  CHECK(far.faults.support_standoff_extra == doctest::Approx(0.3));

  CHECK_THROWS_AS(load_manifest("/no/such/manifest.json"), Error);
}

TEST_CASE("a broken episode records its failure without aborting the batch") {
  Scenario broken;
  broken.id = "ghost";
  broken.scene_path = "/no/such/scene.json";
  broken.keyword = "put glass into fridge";

  TemplatePlanner planner;
  OracleCritic critic;
  const EpisodeArtifacts artifacts = run_episode(broken, planner, critic, EvolutionConfig{});
  CHECK_FALSE(artifacts.result.complete_success);
  REQUIRE(artifacts.result.error.has_value());
  CHECK(artifacts.result.error->find("scene") != std::string::npos);

  // And in a batch next to a healthy scenario:
  Scenario healthy;
  healthy.id = "ok";
  healthy.scene_path = twtest::fixture_path("t4.json");
  healthy.keyword = "put glass onto table";
  const auto batch = run_bench(
      {broken, healthy}, [] { return std::make_unique<TemplatePlanner>(); },
      [] { return std::make_unique<OracleCritic>(); }, EvolutionConfig{}, 2);
  REQUIRE(batch.size() == 2);
  CHECK_FALSE(batch[0].result.complete_success);
  CHECK(batch[1].result.complete_success);
}
