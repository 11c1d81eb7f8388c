#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "taskworld/observe.hpp"
#include "taskworld/remote.hpp"
#include "taskworld/task.hpp"
#include "taskworld/wire.hpp"
#include "taskworld/world.hpp"

namespace taskworld {

enum class CritiqueFlag { Collision, DoorDisturbed, GraspEmpty, NotPlaced, NoProgress, Ok };

const char* critique_flag_name(CritiqueFlag flag);

struct Critique {
  int step_index = 0;  // 0-based position in the executed flow
  std::string text;
  std::set<CritiqueFlag> flags;

  bool ok() const { return flags.count(CritiqueFlag::Ok) > 0; }
};

struct SupervisorProposal {
  ActionFlow flow;
  std::string reason;
};

struct EvolutionRecord {
  int iteration = 0;
  ActionFlow flow;
  std::vector<Critique> critiques;
  std::string supervisor_reason;
  bool success = false;
};

enum class EvolutionOutcome { Succeeded, ExhaustedBudget };

struct EvolutionHistory {
  std::string subtask_ref;
  std::vector<EvolutionRecord> records;
  EvolutionOutcome outcome = EvolutionOutcome::ExhaustedBudget;

  bool succeeded() const { return outcome == EvolutionOutcome::Succeeded; }
  // Iterations consumed by the successful attempt (0 = initial plan worked).
  int iterations_used() const { return records.empty() ? 0 : records.back().iteration; }
  // Success that needed at least one evolution iteration.
  bool rescued() const { return succeeded() && iterations_used() > 0; }

  nlohmann::json to_json() const;
};

class Critic {
 public:
  virtual ~Critic() = default;
  virtual std::vector<Critique> inspect(const ExecutionTrace& trace, const ObservationSet& obs,
                                        const SimpleTask& task) = 0;
  virtual SupervisorProposal supervise(const ExecutionTrace& trace,
                                       const std::vector<Critique>& critiques,
                                       const SimpleTask& task,
                                       const EvolutionHistory& history) = 0;
};

// Deterministic trace-driven critic: flags derive from execution events and
// predicate diffs, repairs from a fixed rulebook (sequence modification and
// parameter adjustment).
class OracleCritic : public Critic {
 public:
  std::vector<Critique> inspect(const ExecutionTrace& trace, const ObservationSet& obs,
                                const SimpleTask& task) override;
  SupervisorProposal supervise(const ExecutionTrace& trace,
                               const std::vector<Critique>& critiques, const SimpleTask& task,
                               const EvolutionHistory& history) override;
};

// Client for an external inspector/supervisor endpoint (AGT_CRITIC_URL /
// AGT_CRITIC_TOKEN). Inspector flags are recovered from the returned
// observation texts by keyword; supervisor replies carry the verbatim
// {"reason", "new_sequence"} keys.
class RemoteCritic : public Critic {
 public:
  explicit RemoteCritic(RemoteEndpoint endpoint) : endpoint_(std::move(endpoint)) {}

  std::vector<Critique> inspect(const ExecutionTrace& trace, const ObservationSet& obs,
                                const SimpleTask& task) override;
  SupervisorProposal supervise(const ExecutionTrace& trace,
                               const std::vector<Critique>& critiques, const SimpleTask& task,
                               const EvolutionHistory& history) override;

 private:
  RemoteEndpoint endpoint_;
};

// Step-wise critique pass. Throws MisalignedObservations when the
// observation set does not cover the trace one-to-one.
std::vector<Critique> inspect_steps(const ExecutionTrace& trace, const ObservationSet& obs,
                                    const SimpleTask& task, Critic& critic);

// Global repair pass; enforces the no-repeat rule post-hoc (a proposal equal
// to any flow in the history raises RepeatedProposal).
SupervisorProposal supervise(const ExecutionTrace& trace,
                             const std::vector<Critique>& critiques, const SimpleTask& task,
                             const EvolutionHistory& history, Critic& critic);

// The closed-loop refinement: execute, check, inspect, supervise, retry —
// each iteration from a fresh copy of the entry state, at most tau_max
// evolution rounds past the initial plan. Throws InitUnsatisfied when the
// entry state violates task.init.
EvolutionHistory evolve_subtask(const WorldState& world, const SimpleTask& task,
                                const ActionFlow& flow0, const EvolutionConfig& config,
                                Critic& critic);

struct ComplexEvolutionResult {
  std::vector<EvolutionHistory> histories;
  bool overall_success = false;
  WorldState final_state;
};

// Subtasks in order; a success seeds the next subtask through the transfer,
// an exhausted budget stops the episode.
ComplexEvolutionResult evolve_complex(const WorldState& world, const ComplexTask& plan,
                                      const std::vector<ActionFlow>& flows,
                                      const EvolutionConfig& config, Critic& critic);

// JSONL: one line per iteration {"iter", "new_sequence", "reason", "success"}.
std::string evolution_log_jsonl(const EvolutionHistory& history);

}  // namespace taskworld
