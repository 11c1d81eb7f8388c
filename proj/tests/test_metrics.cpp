#include <filesystem>
#include <random>

#include "doctest.h"
#include "taskworld/errors.hpp"
#include "taskworld/metrics.hpp"

using namespace taskworld;

namespace {

EpisodeResult episode(const std::string& task, bool s1, int it1, bool s2, int it2) {
  EpisodeResult r;
  r.scenario_id = task + "_ep";
  r.task_name = task;
  r.subtasks.push_back({s1, it1, s1 && it1 > 0});
  r.subtasks.push_back({s2, it2, s2 && it2 > 0});
  r.complete_success = s1 && s2;
  r.total_iterations = it1 + it2;
  return r;
}

}  // namespace

TEST_CASE("the overall success rate reproduces 73 of 102 as 71.6") {
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
  REQUIRE(table.overall_sr().has_value());
  CHECK(format_metric(table.overall_sr()) == "71.6");
  CHECK(table.total_successes == 73);
}

TEST_CASE("ESR counts rescues among iteration-0 failures and is dashed when none") {
  std::vector<EpisodeResult> results;
  // 10 episodes whose second subtask failed initially; 4 were rescued.
  for (int i = 0; i < 10; ++i) {
    const bool rescued = i < 4;
    results.push_back(episode("place", true, 0, rescued, rescued ? 2 : 5));
    if (!rescued) results.back().subtasks[1].succeeded = false;
  }
  const MetricTable table = summarize(results);
  const CellStats& sub2 = table.categories.at("place").subtask_cells[1];
  CHECK(format_metric(sub2.esr()) == "40.0");
  // Subtask 1 always succeeded at iteration 0: no denominator.
  const CellStats& sub1 = table.categories.at("place").subtask_cells[0];
  CHECK(!sub1.esr().has_value());
  CHECK(format_metric(sub1.esr()) == "—");
  CHECK(render_table(table).find("—") != std::string::npos);
}

TEST_CASE("Iter averages only successful episodes") {
  std::vector<EpisodeResult> results;
  results.push_back(episode("move", true, 2, true, 0));
  results.push_back(episode("move", true, 1, true, 0));
  results.push_back(episode("move", false, 5, true, 0));  // failed; excluded from Iter
  results.back().subtasks[0].succeeded = false;
  results.back().complete_success = false;
  const MetricTable table = summarize(results);
  const CellStats& sub1 = table.categories.at("move").subtask_cells[0];
  CHECK(sub1.iter() == doctest::Approx(1.5));
  CHECK(format_metric(sub1.iter()) == "1.5");
}

TEST_CASE("adding a successful episode never lowers SR") {
  std::vector<EpisodeResult> results{episode("t", true, 0, false, 5)};
  results[0].subtasks[1].succeeded = false;
  MetricTable table = summarize(results);
  const double before = *table.categories.at("t").subtask_cells[0].sr();
  results.push_back(episode("t", true, 0, true, 0));
  table = summarize(results);
  CHECK(*table.categories.at("t").subtask_cells[0].sr() >= before);
}

TEST_CASE("merge over random partitions equals the single-batch summary") {
  std::vector<EpisodeResult> all;
  std::mt19937 rng(4242);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<int> iters(0, 5);
  for (int i = 0; i < 60; ++i) {
    const bool s1 = coin(rng) == 1, s2 = coin(rng) == 1;
    all.push_back(episode(i % 2 == 0 ? "alpha" : "beta", s1, s1 ? iters(rng) : 5, s2,
                          s2 ? iters(rng) : 5));
  }
  const MetricTable whole = summarize(all);
  std::uniform_int_distribution<size_t> cut(1, all.size() - 1);
  for (int trial = 0; trial < 100; ++trial) {
    const size_t k = cut(rng);
    const MetricTable merged =
        merge(summarize({all.begin(), all.begin() + static_cast<long>(k)}),
              summarize({all.begin() + static_cast<long>(k), all.end()}));
    CHECK(merged.to_json() == whole.to_json());
  }
}

TEST_CASE("persist round-trips and append accumulates batches") {
  namespace fs = std::filesystem;
  const std::string dir = (fs::temp_directory_path() / "tw_metrics_test").string();
  fs::remove_all(dir);

  std::vector<EpisodeResult> batch1{episode("a", true, 0, true, 1)};
  std::vector<EpisodeResult> batch2{episode("a", true, 2, false, 5)};
  batch2[0].subtasks[1].succeeded = false;
  batch2[0].complete_success = false;

  persist(batch1, dir);
  persist(batch2, dir, /*append=*/true);
  const std::vector<EpisodeResult> loaded = load_results(dir);
  REQUIRE(loaded.size() == 2);

  std::vector<EpisodeResult> both = batch1;
  both.push_back(batch2[0]);
  CHECK(summarize(loaded).to_json() == summarize(both).to_json());
  fs::remove_all(dir);

  CHECK_THROWS_AS(persist(batch1, "/proc/definitely/not/writable"), Error);
  CHECK_THROWS_AS(summarize({}), Error);
}
