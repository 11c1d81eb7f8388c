#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace taskworld {

struct SubtaskOutcome {
  bool succeeded = false;
  int iterations_used = 0;
  bool rescued = false;  // succeeded with iterations_used > 0
};

struct EpisodeResult {
  std::string scenario_id;
  std::string task_name;  // aggregation category
  std::vector<SubtaskOutcome> subtasks;
  bool complete_success = false;
  int total_iterations = 0;
  std::optional<std::string> error;  // episode-level failure, kept for audit

  nlohmann::json to_json() const;
  static EpisodeResult from_json(const nlohmann::json& j);
};

// Mergeable counters per (category, subtask position) and per category.
struct CellStats {
  long attempts = 0;
  long successes = 0;
  long initial_failures = 0;  // iteration-0 execution failed
  long rescued = 0;
  long iterations_among_successes = 0;

  std::optional<double> sr() const;     // percent
  std::optional<double> esr() const;    // percent, empty when no initial failures
  std::optional<double> iter() const;   // mean among successes
};

struct CategoryStats {
  std::vector<CellStats> subtask_cells;
  long episodes = 0;
  long complete_successes = 0;
  long iterations_among_complete = 0;
};

struct MetricTable {
  std::map<std::string, CategoryStats> categories;
  long total_episodes = 0;
  long total_successes = 0;  // complete successes across categories

  std::optional<double> overall_sr() const;

  nlohmann::json to_json() const;
  static MetricTable from_json(const nlohmann::json& j);
};

// Throws EmptyBatch on an empty input.
MetricTable summarize(const std::vector<EpisodeResult>& results);

// Count-wise merge; summarize(A ++ B) == merge(summarize(A), summarize(B)).
MetricTable merge(const MetricTable& a, const MetricTable& b);

// Percentages and Iter to one decimal; "—" for undefined cells.
std::string format_metric(const std::optional<double>& value);

// Plain-text table: one row per category with SR / ESR / Iter per subtask
// position, the complete task and the unweighted subtask average.
std::string render_table(const MetricTable& table);

// JSONL episode results plus a summary JSON document; append mode
// accumulates batches.
void persist(const std::vector<EpisodeResult>& results, const std::string& directory,
             bool append = false);
std::vector<EpisodeResult> load_results(const std::string& directory);

}  // namespace taskworld
