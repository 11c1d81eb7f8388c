#include <cstdint>

#include "doctest.h"
#include "taskworld/observe.hpp"
#include "taskworld/taskgen.hpp"
#include "test_util.hpp"

using namespace taskworld;

namespace {

// Independent index oracle: round(i*(n-1)/(cap-1)) via integer arithmetic,
// round-half-up on an exact rational.
std::vector<int> oracle_indices(int n, int cap) {
  std::vector<int> out;
  if (n <= cap) {
    for (int i = 0; i < n; ++i) out.push_back(i);
    return out;
  }
  for (int i = 0; i < cap; ++i) {
    const std::int64_t p = static_cast<std::int64_t>(i) * (n - 1);
    const std::int64_t q = cap - 1;
    out.push_back(static_cast<int>((2 * p + q) / (2 * q)));
  }
  return out;
}

std::vector<Frame> frames_of(int n) {
  std::vector<Frame> frames;
  for (int i = 0; i < n; ++i) frames.push_back({i, ViewKind::Global, "f" + std::to_string(i)});
  return frames;
}

}  // namespace

TEST_CASE("downsample keeps endpoints and matches the hand-derived n=14 indices") {
  CHECK(downsample_indices(14, 6) == std::vector<int>{0, 3, 5, 8, 10, 13});
  CHECK(downsample_indices(6, 6) == std::vector<int>{0, 1, 2, 3, 4, 5});
  CHECK(downsample_indices(2, 6) == std::vector<int>{0, 1});
  const auto kept = downsample(frames_of(14), 6);
  REQUIRE(kept.size() == 6);
  CHECK(kept.front().payload == "f0");
  CHECK(kept.back().payload == "f13");
}

TEST_CASE("downsample agrees with the exhaustive oracle for n up to 40") {
  for (int n = 1; n <= 40; ++n) {
    const auto got = downsample_indices(n, 6);
    const auto want = oracle_indices(n, 6);
    CHECK(got == want);
    CHECK(got.size() == static_cast<size_t>(std::min(n, 6)));
    for (size_t i = 1; i < got.size(); ++i) CHECK(got[i] > got[i - 1]);
    if (n >= 1) {
      CHECK(got.front() == 0);
      CHECK(got.back() == n - 1);
    }
  }
}

TEST_CASE("capture produces per-step frame sets capped at six per view") {
  const SceneConfig scene = twtest::load_fixture("t1.json");
  const GenerationBundle bundle = twtest::make_bundle(scene, "put glass into fridge");
  WorldState world = twtest::make_episode_world(scene, bundle);
  const ExecutionTrace trace =
      execute_flow(world, bundle.flows[0], bundle.plan.subtasks[0]);

  EvolutionConfig config;
  const ObservationSet obs = capture(trace, config);
  REQUIRE(obs.step_count() == static_cast<int>(trace.steps.size()));
  for (int s = 1; s <= obs.step_count(); ++s) {
    const auto& per_view = obs.step(s);
    REQUIRE(per_view.size() == config.views.size());
    for (const auto& [view, frames] : per_view) {
      CHECK(config.views.count(view) == 1);
      CHECK(frames.size() <= 6);
      const int duration = trace.steps[static_cast<size_t>(s) - 1].duration_ticks;
      CHECK(static_cast<int>(frames.size()) == std::min(duration, 6));  // p2 = 1
      CHECK_FALSE(frames.front().payload.empty());
    }
  }
  // Determinism: identical capture on a rerun.
  const ObservationSet again = capture(trace, config);
  for (int s = 1; s <= obs.step_count(); ++s) {
    CHECK(obs.step(s).at(ViewKind::Global).back().payload ==
          again.step(s).at(ViewKind::Global).back().payload);
  }
}

TEST_CASE("window clamps at the first step and spans p1 previous steps") {
  const SceneConfig scene = twtest::load_fixture("t1.json");
  const GenerationBundle bundle = twtest::make_bundle(scene, "put glass into fridge");
  WorldState world = twtest::make_episode_world(scene, bundle);
  const ExecutionTrace trace =
      execute_flow(world, bundle.flows[0], bundle.plan.subtasks[0]);
  EvolutionConfig config;
  const ObservationSet obs = capture(trace, config);
  REQUIRE(obs.step_count() >= 4);

  auto count = [&](int step, int p1) {
    size_t n = 0;
    for (const auto& [view, frames] : window(obs, step, p1)) n += frames.size();
    return n;
  };
  auto frames_at = [&](int step) {
    size_t n = 0;
    for (const auto& [view, frames] : obs.step(step)) n += frames.size();
    return n;
  };

  CHECK(count(1, 1) == frames_at(1));                 // clamp at the first step
  CHECK(count(4, 1) == frames_at(3) + frames_at(4));  // steps 3..4
  size_t all = 0;
  for (int s = 1; s <= 4; ++s) all += frames_at(s);
  CHECK(count(4, 10) == all);  // deep look-back clamps to the start
  CHECK_THROWS_AS(window(obs, 0, 1), Error);
  CHECK_THROWS_AS(window(obs, obs.step_count() + 1, 1), Error);
}

TEST_CASE("raster mode emits valid PGM occupancy frames per view") {
  const SceneConfig scene = twtest::load_fixture("t1.json");
  const GenerationBundle bundle = twtest::make_bundle(scene, "put glass into fridge");
  const WorldState world = twtest::make_episode_world(scene, bundle);

  for (ViewKind view : {ViewKind::Global, ViewKind::Head, ViewKind::Wrist}) {
    const std::string pgm = raster_frame(world, view, 32, 32);
    CHECK(pgm.rfind("P2\n32 32\n255\n", 0) == 0);
    // The robot footprint paints at least one black cell in every view.
    if (view != ViewKind::Wrist) CHECK(pgm.find(" 0") != std::string::npos);
  }
  // The global view shows fixtures (shade 60) somewhere on the floor.
  CHECK(raster_frame(world, ViewKind::Global).find("60") != std::string::npos);

  // capture() swaps payloads to rasters when asked.
  const ExecutionTrace trace =
      execute_flow(world, bundle.flows[0], bundle.plan.subtasks[0]);
  EvolutionConfig config;
  config.raster_frames = true;
  const ObservationSet obs = capture(trace, config);
  CHECK(obs.step(1).at(ViewKind::Global).front().payload.rfind("P2\n", 0) == 0);
}

TEST_CASE("evolution config validation") {
  EvolutionConfig config;
  CHECK_NOTHROW(config.validate());
  config.views.clear();
  CHECK_THROWS_AS(config.validate(), Error);
  config = EvolutionConfig{};
  config.tau_max = 0;
  CHECK_THROWS_AS(config.validate(), Error);
}
