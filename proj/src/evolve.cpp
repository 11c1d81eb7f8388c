#include "taskworld/evolve.hpp"

#include <algorithm>

namespace taskworld {

using nlohmann::json;

const char* critique_flag_name(CritiqueFlag flag) {
  switch (flag) {
    case CritiqueFlag::Collision: return "collision";
    case CritiqueFlag::DoorDisturbed: return "door_disturbed";
    case CritiqueFlag::GraspEmpty: return "grasp_empty";
    case CritiqueFlag::NotPlaced: return "not_placed";
    case CritiqueFlag::NoProgress: return "no_progress";
    case CritiqueFlag::Ok: return "ok";
  }
  return "?";
}

json EvolutionHistory::to_json() const {
  json j;
  j["subtask"] = subtask_ref;
  j["outcome"] = succeeded() ? "succeeded" : "exhausted_budget";
  json recs = json::array();
  for (const auto& r : records) {
    json rec;
    rec["iter"] = r.iteration;
    rec["new_sequence"] = encode_flow(r.flow);
    rec["reason"] = r.supervisor_reason;
    rec["success"] = r.success;
    json crits = json::array();
    for (const auto& c : r.critiques) {
      json flags = json::array();
      for (const auto& f : c.flags) flags.push_back(critique_flag_name(f));
      crits.push_back({{"step", c.step_index}, {"text", c.text}, {"flags", std::move(flags)}});
    }
    rec["critiques"] = std::move(crits);
    recs.push_back(std::move(rec));
  }
  j["records"] = std::move(recs);
  return j;
}

// ---------------------------------------------------------------------------
// OracleCritic

namespace {

bool is_movement_kind(PrimitiveKind kind) {
  switch (kind) {
    case PrimitiveKind::NavigateToTarget:
    case PrimitiveKind::NavigateToSupport:
    case PrimitiveKind::LiftEefUp:
    case PrimitiveKind::LiftEefDown:
    case PrimitiveKind::MoveEefForward:
    case PrimitiveKind::MoveEefBackward:
    case PrimitiveKind::MoveEefLeft:
    case PrimitiveKind::MoveEefRight:
    case PrimitiveKind::MoveBaseForward:
    case PrimitiveKind::MoveBaseBackward:
    case PrimitiveKind::MoveBaseLeft:
    case PrimitiveKind::MoveBaseRight:
    case PrimitiveKind::TurnBaseLeft:
    case PrimitiveKind::TurnBaseRight:
      return true;
    default:
      return false;
  }
}

bool is_base_motion(PrimitiveKind kind) {
  switch (kind) {
    case PrimitiveKind::NavigateToTarget:
    case PrimitiveKind::NavigateToSupport:
    case PrimitiveKind::MoveBaseForward:
    case PrimitiveKind::MoveBaseBackward:
    case PrimitiveKind::MoveBaseLeft:
    case PrimitiveKind::MoveBaseRight:
      return true;
    default:
      return false;
  }
}

bool placement_goal(const SimpleTask& task) {
  return std::any_of(task.goal.begin(), task.goal.end(), [](const Predicate& p) {
    return !p.negated &&
           (p.name == PredicateName::Inside || p.name == PredicateName::OnTop);
  });
}

bool close_goal_unsatisfied(const SimpleTask& task, const WorldState& final_state) {
  for (const auto& p : task.goal) {
    if (p.name == PredicateName::Open && p.negated && !evaluate_predicate(final_state, p)) {
      return true;
    }
  }
  return false;
}

std::map<std::string, bool> valuation_map(const WorldState& state) {
  std::map<std::string, bool> m;
  for (const auto& [p, v] : snapshot_predicates(state)) m[p.key()] = v;
  return m;
}

}  // namespace

std::vector<Critique> OracleCritic::inspect(const ExecutionTrace& trace,
                                            const ObservationSet& obs, const SimpleTask& task) {
  (void)obs;  // the oracle reads the trace directly
  std::vector<Critique> critiques;
  auto prev_valuation = valuation_map(trace.initial_state);

  for (size_t j = 0; j < trace.steps.size(); ++j) {
    const StepRecord& step = trace.steps[j];
    Critique c;
    c.step_index = static_cast<int>(j);
    std::string notes;

    for (const auto& e : step.events) {
      switch (e.kind) {
        case EventKind::Collision:
          c.flags.insert(CritiqueFlag::Collision);
          notes += " collision with " + (e.subjects.empty() ? "scene" : e.subjects.front()) + ";";
          break;
        case EventKind::DoorDisturbed:
          c.flags.insert(CritiqueFlag::DoorDisturbed);
          notes += " door of " + e.subjects.front() + " disturbed;";
          break;
        case EventKind::GraspEmpty:
          c.flags.insert(CritiqueFlag::GraspEmpty);
          notes += " gripper closed on nothing;";
          break;
        default:
          break;
      }
    }

    auto valuation = valuation_map(step.post_state);
    const bool changed = valuation != prev_valuation;
    const bool goal_met = evaluate_conjunction(step.post_state, task.goal);

    if (j + 1 == trace.steps.size() && step.action.kind == PrimitiveKind::Ungrasp &&
        placement_goal(task) && !goal_met) {
      c.flags.insert(CritiqueFlag::NotPlaced);
      notes += " released object is not at its goal support;";
    }
    if (c.flags.empty() && is_movement_kind(step.action.kind) && !changed && !goal_met) {
      c.flags.insert(CritiqueFlag::NoProgress);
      notes += " motion changed no relations while the goal is unmet;";
    }
    if (c.flags.empty()) {
      c.flags.insert(CritiqueFlag::Ok);
      notes = " executed as commanded;";
    }

    c.text = "step " + std::to_string(j) + " " + step.action.to_string() + ":" + notes;
    prev_valuation = std::move(valuation);
    critiques.push_back(std::move(c));
  }
  return critiques;
}

namespace {

bool has_flag(const std::vector<Critique>& critiques, CritiqueFlag flag, size_t* index) {
  for (size_t j = 0; j < critiques.size(); ++j) {
    if (critiques[j].flags.count(flag)) {
      if (index) *index = j;
      return true;
    }
  }
  return false;
}

std::optional<size_t> last_index_of(const ActionFlow& flow, PrimitiveKind kind) {
  for (size_t i = flow.size(); i > 0; --i) {
    if (flow[i - 1].kind == kind) return i - 1;
  }
  return std::nullopt;
}

}  // namespace

SupervisorProposal OracleCritic::supervise(const ExecutionTrace& trace,
                                           const std::vector<Critique>& critiques,
                                           const SimpleTask& task,
                                           const EvolutionHistory& history) {
  (void)history;  // the rulebook is monotone; repeats cannot occur
  const ActionFlow& flow =
      trace.steps.empty() ? ActionFlow{} : [&] {
        ActionFlow f;
        for (const auto& s : trace.steps) f.push_back(s.action);
        return f;
      }();
  const WorldState& final_state =
      trace.steps.empty() ? trace.initial_state : trace.steps.back().post_state;

  // Rule 1: a struck door during base motion — side-step before advancing.
  size_t door_step = 0;
  if (has_flag(critiques, CritiqueFlag::DoorDisturbed, &door_step)) {
    size_t insert_at = door_step;
    if (!is_base_motion(flow[door_step].kind)) {
      // Root cause is the advance that swept the door region.
      for (size_t j = door_step; j > 0; --j) {
        if (is_base_motion(flow[j - 1].kind)) {
          insert_at = j - 1;
          break;
        }
      }
    }
    ActionFlow repaired = flow;
    repaired.insert(repaired.begin() + static_cast<long>(insert_at),
                    PrimitiveAction::make(PrimitiveKind::MoveBaseLeft, 0.3));
    return {repaired,
            "base advance swept the open door region; inserted MOVE_BASE_LEFT(0.3) before "
            "step " + std::to_string(insert_at) + " to clear the swing path"};
  }

  // Rule 2: empty grasp — back off and re-align the approach.
  size_t grasp_step = 0;
  if (has_flag(critiques, CritiqueFlag::GraspEmpty, &grasp_step)) {
    ActionFlow repaired = flow;
    const PrimitiveAction realign[3] = {PrimitiveAction::make(PrimitiveKind::Retreat),
                                        PrimitiveAction::make(PrimitiveKind::Approach),
                                        PrimitiveAction::make(PrimitiveKind::Converge)};
    repaired.insert(repaired.begin() + static_cast<long>(grasp_step), realign, realign + 3);
    return {repaired,
            "gripper closed on nothing at step " + std::to_string(grasp_step) +
                "; inserted RETREAT, APPROACH, CONVERGE to re-align before grasping"};
  }

  // Rule 3: the door is still open after a close attempt — widen the sweep
  // and push the panel home before releasing.
  if (close_goal_unsatisfied(task, final_state)) {
    if (auto close_at = last_index_of(flow, PrimitiveKind::ArticulateClose)) {
      ActionFlow repaired = flow;
      RangeParam range = repaired[*close_at].effective_range();
      range.max = std::min(1.0, range.max + 0.1);
      repaired[*close_at].range = range;
      const auto ungrasp_at = last_index_of(repaired, PrimitiveKind::Ungrasp);
      const size_t insert_at = ungrasp_at ? *ungrasp_at : repaired.size();
      repaired.insert(repaired.begin() + static_cast<long>(insert_at),
                      PrimitiveAction::make(PrimitiveKind::MoveEefForward, 0.1));
      return {repaired,
              "close sweep lacked authority and left a residual opening; widened "
              "ARTICULATE_CLOSE to max " + format_param(range.max) +
                  " and inserted MOVE_EEF_FORWARD(0.1) before UNGRASP"};
    }
  }

  // Rule 4: release missed the goal support — extend the reach and lower
  // before releasing.
  if (has_flag(critiques, CritiqueFlag::NotPlaced, nullptr)) {
    ActionFlow repaired = flow;
    const auto ungrasp_at = last_index_of(repaired, PrimitiveKind::Ungrasp);
    const size_t terminal = ungrasp_at ? *ungrasp_at : repaired.size();
    if (auto mef_at = last_index_of(repaired, PrimitiveKind::MoveEefForward)) {
      repaired[*mef_at].scalar = *repaired[*mef_at].scalar + 0.2;
    } else {
      repaired.insert(repaired.begin() + static_cast<long>(terminal),
                      PrimitiveAction::make(PrimitiveKind::MoveEefForward, 0.2));
    }
    const auto ungrasp_now = last_index_of(repaired, PrimitiveKind::Ungrasp);
    const size_t insert_at = ungrasp_now ? *ungrasp_now : repaired.size();
    if (!last_index_of(repaired, PrimitiveKind::LiftEefDown)) {
      repaired.insert(repaired.begin() + static_cast<long>(insert_at),
                      PrimitiveAction::make(PrimitiveKind::LiftEefDown, 0.3));
    }
    return {repaired,
            "released object missed the goal support; extended MOVE_EEF_FORWARD by 0.2 and "
            "ensured LIFT_EEF_DOWN(0.3) precedes UNGRASP"};
  }

  // Fallback: conservative retreat appended, guaranteed to differ.
  ActionFlow repaired = flow;
  repaired.push_back(PrimitiveAction::make(PrimitiveKind::Retreat));
  return {repaired, "no specific fault signature; appended RETREAT to vary the attempt"};
}

// ---------------------------------------------------------------------------
// Free functions

std::vector<Critique> inspect_steps(const ExecutionTrace& trace, const ObservationSet& obs,
                                    const SimpleTask& task, Critic& critic) {
  if (obs.step_count() != static_cast<int>(trace.steps.size())) {
    throw Error(ErrorCode::MisalignedObservations,
                "trace has " + std::to_string(trace.steps.size()) + " steps, observations " +
                    std::to_string(obs.step_count()));
  }
  std::vector<Critique> critiques = critic.inspect(trace, obs, task);
  if (critiques.size() != trace.steps.size()) {
    throw Error(ErrorCode::MisalignedObservations,
                "critic returned " + std::to_string(critiques.size()) + " critiques for " +
                    std::to_string(trace.steps.size()) + " steps");
  }
  return critiques;
}

SupervisorProposal supervise(const ExecutionTrace& trace,
                             const std::vector<Critique>& critiques, const SimpleTask& task,
                             const EvolutionHistory& history, Critic& critic) {
  SupervisorProposal proposal = critic.supervise(trace, critiques, task, history);
  if (proposal.flow.empty()) {
    throw Error(ErrorCode::EmptySequence, "supervisor proposed an empty flow");
  }
  for (const auto& record : history.records) {
    if (record.flow == proposal.flow) {
      throw Error(ErrorCode::RepeatedProposal,
                  "supervisor re-proposed the flow of iteration " +
                      std::to_string(record.iteration));
    }
  }
  return proposal;
}

EvolutionHistory evolve_subtask(const WorldState& world, const SimpleTask& task,
                                const ActionFlow& flow0, const EvolutionConfig& config,
                                Critic& critic) {
  config.validate();
  task.validate();
  if (flow0.empty()) throw Error(ErrorCode::EmptyFlow, "initial flow is empty");
  if (!evaluate_conjunction(world, task.init)) {
    throw Error(ErrorCode::InitUnsatisfied,
                "entry state violates init of '" + task.name +
                    "': " + conjunction_to_string(task.init));
  }

  EvolutionHistory history;
  history.subtask_ref = task.name;
  ActionFlow flow = flow0;

  for (int iteration = 0; iteration <= config.tau_max; ++iteration) {
    // Episode reset: every attempt starts from the entry state.
    ExecutionTrace trace = execute_flow(world, flow, task);

    EvolutionRecord record;
    record.iteration = iteration;
    record.flow = flow;
    record.success = trace.success;

    if (trace.success) {
      history.records.push_back(std::move(record));
      history.outcome = EvolutionOutcome::Succeeded;
      return history;
    }

    const ObservationSet obs = capture(trace, config);
    record.critiques = inspect_steps(trace, obs, task, critic);
    SupervisorProposal proposal =
        supervise(trace, record.critiques, task, history, critic);
    record.supervisor_reason = proposal.reason;
    history.records.push_back(std::move(record));
    flow = std::move(proposal.flow);
  }

  history.outcome = EvolutionOutcome::ExhaustedBudget;
  return history;
}

ComplexEvolutionResult evolve_complex(const WorldState& world, const ComplexTask& plan,
                                      const std::vector<ActionFlow>& flows,
                                      const EvolutionConfig& config, Critic& critic) {
  plan.validate();
  if (flows.size() != plan.subtasks.size()) {
    throw Error(ErrorCode::ValidationError, "need one initial flow per subtask");
  }

  ComplexEvolutionResult result;
  result.final_state = world;
  WorldState current = world;

  for (size_t k = 0; k < plan.subtasks.size(); ++k) {
    EvolutionHistory history =
        evolve_subtask(current, plan.subtasks[k], flows[k], config, critic);
    const bool ok = history.succeeded();
    const ActionFlow winning = history.records.back().flow;
    result.histories.push_back(std::move(history));
    if (!ok) {
      result.overall_success = false;
      return result;
    }
    // Deterministic engine: re-running the winning flow reproduces the
    // successful episode and yields the seed state for the next subtask.
    ExecutionTrace trace = execute_flow(current, winning, plan.subtasks[k]);
    current = trace.steps.back().post_state;
    if (k + 1 < plan.subtasks.size()) {
      current = apply_transfer(current, plan.transfers[k]);
    }
  }
  result.overall_success = true;
  result.final_state = current;
  return result;
}

std::string evolution_log_jsonl(const EvolutionHistory& history) {
  std::string out;
  for (const auto& record : history.records) {
    json line;
    line["iter"] = record.iteration;
    line["new_sequence"] = encode_flow(record.flow);
    line["reason"] = record.supervisor_reason;
    line["success"] = record.success;
    out += line.dump() + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// RemoteCritic

namespace {

json task_summary(const SimpleTask& task) {
  return {{"name", task.name},
          {"description", task.description},
          {"target", task.target},
          {"support_init", task.support_init ? json(*task.support_init) : json()},
          {"support_goal", task.support_goal ? json(*task.support_goal) : json()},
          {"init", conjunction_to_string(task.init)},
          {"goal", conjunction_to_string(task.goal)}};
}

json observations_payload(const ExecutionTrace& trace, const ObservationSet& obs) {
  json out = json::array();
  for (size_t j = 0; j < trace.steps.size(); ++j) {
    const auto windowed = window(obs, static_cast<int>(j) + 1, obs.config().p1);
    json views = json::object();
    for (const auto& [view, frames] : windowed) {
      json payloads = json::array();
      for (const auto& f : frames) payloads.push_back(f.payload);
      views[view_kind_name(view)] = std::move(payloads);
    }
    out.push_back({{"step", static_cast<int>(j)}, {"views", std::move(views)}});
  }
  return out;
}

json history_payload(const EvolutionHistory& history) {
  json out = json::array();
  for (const auto& record : history.records) {
    out.push_back(
        {{"new_sequence", encode_flow(record.flow)}, {"reason", record.supervisor_reason}});
  }
  return out;
}

std::set<CritiqueFlag> flags_from_text(const std::string& text) {
  std::string lower;
  lower.reserve(text.size());
  for (char c : text) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  std::set<CritiqueFlag> flags;
  auto mentions = [&](const char* token) { return lower.find(token) != std::string::npos; };
  if (mentions("collision") || mentions("collide") || mentions("struck")) {
    flags.insert(CritiqueFlag::Collision);
  }
  if (mentions("door")) flags.insert(CritiqueFlag::DoorDisturbed);
  if (mentions("empty") || mentions("grasping air") || mentions("nothing in the gripper")) {
    flags.insert(CritiqueFlag::GraspEmpty);
  }
  if (mentions("not placed") || mentions("missed the")) flags.insert(CritiqueFlag::NotPlaced);
  if (mentions("no progress") || mentions("unchanged")) {
    flags.insert(CritiqueFlag::NoProgress);
  }
  if (flags.empty()) flags.insert(CritiqueFlag::Ok);
  return flags;
}

ActionFlow flow_of(const ExecutionTrace& trace) {
  ActionFlow f;
  for (const auto& s : trace.steps) f.push_back(s.action);
  return f;
}

}  // namespace

std::vector<Critique> RemoteCritic::inspect(const ExecutionTrace& trace,
                                            const ObservationSet& obs,
                                            const SimpleTask& task) {
  json body = {{"role", "inspector"},
               {"task", task_summary(task)},
               {"actions", encode_flow(flow_of(trace))},
               {"critiques", json::array()},
               {"observations", observations_payload(trace, obs)},
               {"history", json::array()}};
  const json reply = post_json(endpoint_, body, ErrorCode::CriticUnavailable);
  if (!reply.contains("observations") || !reply.at("observations").is_object()) {
    throw Error(ErrorCode::ParseError, "inspector reply lacks an observations object");
  }

  std::vector<Critique> critiques(trace.steps.size());
  for (size_t j = 0; j < critiques.size(); ++j) {
    critiques[j].step_index = static_cast<int>(j);
    critiques[j].flags.insert(CritiqueFlag::Ok);
  }
  for (const auto& [key, value] : reply.at("observations").items()) {
    // Keys follow "Step <j> observation".
    int step = -1;
    if (std::sscanf(key.c_str(), "Step %d", &step) != 1) continue;
    if (step < 0 || step >= static_cast<int>(critiques.size())) continue;
    Critique& c = critiques[static_cast<size_t>(step)];
    c.text = value.get<std::string>();
    c.flags = flags_from_text(c.text);
  }
  return critiques;
}

SupervisorProposal RemoteCritic::supervise(const ExecutionTrace& trace,
                                           const std::vector<Critique>& critiques,
                                           const SimpleTask& task,
                                           const EvolutionHistory& history) {
  json critique_texts = json::array();
  for (const auto& c : critiques) critique_texts.push_back(c.text);
  json body = {{"role", "supervisor"},
               {"task", task_summary(task)},
               {"actions", encode_flow(flow_of(trace))},
               {"critiques", std::move(critique_texts)},
               {"observations", json::array()},
               {"history", history_payload(history)}};
  const json reply = post_json(endpoint_, body, ErrorCode::CriticUnavailable);
  if (!reply.contains("reason") || !reply.contains("new_sequence")) {
    throw Error(ErrorCode::ParseError, "supervisor reply lacks reason/new_sequence");
  }
  return {decode_flow(reply.at("new_sequence")), reply.at("reason").get<std::string>()};
}

}  // namespace taskworld
