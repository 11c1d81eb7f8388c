#include "taskworld/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "taskworld/errors.hpp"

namespace taskworld {

using nlohmann::json;

json EpisodeResult::to_json() const {
  json j;
  j["scenario_id"] = scenario_id;
  j["task"] = task_name;
  json subs = json::array();
  for (const auto& s : subtasks) {
    subs.push_back({{"succeeded", s.succeeded},
                    {"iterations_used", s.iterations_used},
                    {"rescued", s.rescued}});
  }
  j["subtasks"] = std::move(subs);
  j["complete_success"] = complete_success;
  j["total_iterations"] = total_iterations;
  j["error"] = error ? json(*error) : json();
  return j;
}

EpisodeResult EpisodeResult::from_json(const json& j) {
  EpisodeResult r;
  r.scenario_id = j.at("scenario_id").get<std::string>();
  r.task_name = j.at("task").get<std::string>();
  for (const auto& s : j.at("subtasks")) {
    r.subtasks.push_back({s.at("succeeded").get<bool>(), s.at("iterations_used").get<int>(),
                          s.at("rescued").get<bool>()});
  }
  r.complete_success = j.at("complete_success").get<bool>();
  r.total_iterations = j.at("total_iterations").get<int>();
  if (j.contains("error") && !j.at("error").is_null()) {
    r.error = j.at("error").get<std::string>();
  }
  return r;
}

std::optional<double> CellStats::sr() const {
  if (attempts == 0) return std::nullopt;
  return 100.0 * static_cast<double>(successes) / static_cast<double>(attempts);
}

std::optional<double> CellStats::esr() const {
  if (initial_failures == 0) return std::nullopt;
  return 100.0 * static_cast<double>(rescued) / static_cast<double>(initial_failures);
}

std::optional<double> CellStats::iter() const {
  if (successes == 0) return std::nullopt;
  return static_cast<double>(iterations_among_successes) / static_cast<double>(successes);
}

std::optional<double> MetricTable::overall_sr() const {
  if (total_episodes == 0) return std::nullopt;
  return 100.0 * static_cast<double>(total_successes) / static_cast<double>(total_episodes);
}

MetricTable summarize(const std::vector<EpisodeResult>& results) {
  if (results.empty()) throw Error(ErrorCode::EmptyBatch, "no episode results to summarize");

  MetricTable table;
  for (const auto& episode : results) {
    CategoryStats& cat = table.categories[episode.task_name];
    if (cat.subtask_cells.size() < episode.subtasks.size()) {
      cat.subtask_cells.resize(episode.subtasks.size());
    }
    for (size_t k = 0; k < episode.subtasks.size(); ++k) {
      const SubtaskOutcome& sub = episode.subtasks[k];
      CellStats& cell = cat.subtask_cells[k];
      cell.attempts += 1;
      if (sub.succeeded) {
        cell.successes += 1;
        cell.iterations_among_successes += sub.iterations_used;
      }
      // An episode that needed any evolution iterations failed at iteration 0.
      if (sub.iterations_used > 0 || !sub.succeeded) {
        cell.initial_failures += 1;
      }
      if (sub.rescued) cell.rescued += 1;
    }
    cat.episodes += 1;
    table.total_episodes += 1;
    if (episode.complete_success) {
      cat.complete_successes += 1;
      cat.iterations_among_complete += episode.total_iterations;
      table.total_successes += 1;
    }
  }
  return table;
}

MetricTable merge(const MetricTable& a, const MetricTable& b) {
  MetricTable out = a;
  for (const auto& [name, cat] : b.categories) {
    CategoryStats& dst = out.categories[name];
    if (dst.subtask_cells.size() < cat.subtask_cells.size()) {
      dst.subtask_cells.resize(cat.subtask_cells.size());
    }
    for (size_t k = 0; k < cat.subtask_cells.size(); ++k) {
      const CellStats& src = cat.subtask_cells[k];
      CellStats& cell = dst.subtask_cells[k];
      cell.attempts += src.attempts;
      cell.successes += src.successes;
      cell.initial_failures += src.initial_failures;
      cell.rescued += src.rescued;
      cell.iterations_among_successes += src.iterations_among_successes;
    }
    dst.episodes += cat.episodes;
    dst.complete_successes += cat.complete_successes;
    dst.iterations_among_complete += cat.iterations_among_complete;
  }
  out.total_episodes += b.total_episodes;
  out.total_successes += b.total_successes;
  return out;
}

std::string format_metric(const std::optional<double>& value) {
  if (!value) return "—";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", *value);
  return buf;
}

std::string render_table(const MetricTable& table) {
  std::ostringstream out;
  size_t max_subtasks = 0;
  for (const auto& [name, cat] : table.categories) {
    max_subtasks = std::max(max_subtasks, cat.subtask_cells.size());
  }

  out << "Task";
  for (size_t k = 0; k < max_subtasks; ++k) {
    out << " | Subtask " << k + 1 << " SR/ESR/Iter";
  }
  out << " | Complete SR/Iter | Subtask Avg SR/Iter\n";

  for (const auto& [name, cat] : table.categories) {
    out << name;
    double sr_sum = 0.0, iter_sum = 0.0;
    long sr_cells = 0, iter_cells = 0;
    for (size_t k = 0; k < max_subtasks; ++k) {
      if (k < cat.subtask_cells.size()) {
        const CellStats& cell = cat.subtask_cells[k];
        out << " | " << format_metric(cell.sr()) << " / " << format_metric(cell.esr()) << " / "
            << format_metric(cell.iter());
        if (cell.sr()) {
          sr_sum += *cell.sr();
          ++sr_cells;
        }
        if (cell.iter()) {
          iter_sum += *cell.iter();
          ++iter_cells;
        }
      } else {
        out << " | — / — / —";
      }
    }
    std::optional<double> complete_sr, complete_iter;
    if (cat.episodes > 0) {
      complete_sr = 100.0 * static_cast<double>(cat.complete_successes) /
                    static_cast<double>(cat.episodes);
    }
    if (cat.complete_successes > 0) {
      complete_iter = static_cast<double>(cat.iterations_among_complete) /
                      static_cast<double>(cat.complete_successes);
    }
    out << " | " << format_metric(complete_sr) << " / " << format_metric(complete_iter);
    // Unweighted mean over subtask positions.
    std::optional<double> avg_sr, avg_iter;
    if (sr_cells > 0) avg_sr = sr_sum / static_cast<double>(sr_cells);
    if (iter_cells > 0) avg_iter = iter_sum / static_cast<double>(iter_cells);
    out << " | " << format_metric(avg_sr) << " / " << format_metric(avg_iter) << "\n";
  }

  out << "Overall SR: " << format_metric(table.overall_sr()) << " (" << table.total_successes
      << "/" << table.total_episodes << ")\n";
  return out.str();
}

json MetricTable::to_json() const {
  json j;
  j["total_episodes"] = total_episodes;
  j["total_successes"] = total_successes;
  json cats = json::object();
  for (const auto& [name, cat] : categories) {
    json cells = json::array();
    for (const auto& cell : cat.subtask_cells) {
      cells.push_back({{"attempts", cell.attempts},
                       {"successes", cell.successes},
                       {"initial_failures", cell.initial_failures},
                       {"rescued", cell.rescued},
                       {"iterations_among_successes", cell.iterations_among_successes}});
    }
    cats[name] = {{"subtasks", std::move(cells)},
                  {"episodes", cat.episodes},
                  {"complete_successes", cat.complete_successes},
                  {"iterations_among_complete", cat.iterations_among_complete}};
  }
  j["categories"] = std::move(cats);
  return j;
}

MetricTable MetricTable::from_json(const json& j) {
  MetricTable table;
  table.total_episodes = j.at("total_episodes").get<long>();
  table.total_successes = j.at("total_successes").get<long>();
  for (const auto& [name, cat] : j.at("categories").items()) {
    CategoryStats stats;
    for (const auto& cell : cat.at("subtasks")) {
      stats.subtask_cells.push_back({cell.at("attempts").get<long>(),
                                     cell.at("successes").get<long>(),
                                     cell.at("initial_failures").get<long>(),
                                     cell.at("rescued").get<long>(),
                                     cell.at("iterations_among_successes").get<long>()});
    }
    stats.episodes = cat.at("episodes").get<long>();
    stats.complete_successes = cat.at("complete_successes").get<long>();
    stats.iterations_among_complete = cat.at("iterations_among_complete").get<long>();
    table.categories[name] = std::move(stats);
  }
  return table;
}

void persist(const std::vector<EpisodeResult>& results, const std::string& directory,
             bool append) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) {
    throw Error(ErrorCode::IoError, "cannot create '" + directory + "': " + ec.message());
  }

  const std::string episodes_path = (fs::path(directory) / "episodes.jsonl").string();
  {
    std::ofstream out(episodes_path, append ? std::ios::app : std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + episodes_path + "'");
    for (const auto& r : results) out << r.to_json().dump() << "\n";
  }

  // The summary always reflects the whole file, including appended batches.
  const std::vector<EpisodeResult> all = load_results(directory);
  const MetricTable table = summarize(all);
  const std::string summary_path = (fs::path(directory) / "summary.json").string();
  std::ofstream summary(summary_path, std::ios::trunc);
  if (!summary) throw Error(ErrorCode::IoError, "cannot write '" + summary_path + "'");
  summary << table.to_json().dump(2) << "\n";
}

std::vector<EpisodeResult> load_results(const std::string& directory) {
  namespace fs = std::filesystem;
  const std::string episodes_path = (fs::path(directory) / "episodes.jsonl").string();
  std::ifstream in(episodes_path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read '" + episodes_path + "'");
  std::vector<EpisodeResult> results;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      results.push_back(EpisodeResult::from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, std::string("bad episode line: ") + e.what());
    }
  }
  return results;
}

}  // namespace taskworld
