#include "taskworld/observe.hpp"

#include <cmath>

#include "json.hpp"

namespace taskworld {

using nlohmann::json;

const char* view_kind_name(ViewKind view) {
  switch (view) {
    case ViewKind::Global: return "global";
    case ViewKind::Head: return "head";
    case ViewKind::Wrist: return "wrist";
  }
  return "?";
}

void EvolutionConfig::validate() const {
  if (tau_max < 1) throw Error(ErrorCode::ValidationError, "tau_max must be >= 1");
  if (p1 < 0) throw Error(ErrorCode::ValidationError, "p1 must be >= 0");
  if (p2 < 1) throw Error(ErrorCode::ValidationError, "p2 must be >= 1");
  if (max_frames_per_action < 1) {
    throw Error(ErrorCode::ValidationError, "max_frames_per_action must be >= 1");
  }
  if (views.empty()) throw Error(ErrorCode::ValidationError, "views must be non-empty");
}

const std::map<ViewKind, std::vector<Frame>>& ObservationSet::step(int index_1based) const {
  if (index_1based < 1 || index_1based > step_count()) {
    throw Error(ErrorCode::StepOutOfRange,
                "step " + std::to_string(index_1based) + " outside 1.." +
                    std::to_string(step_count()));
  }
  return steps_[static_cast<size_t>(index_1based) - 1];
}

std::vector<int> downsample_indices(int n, int cap) {
  if (cap < 1) throw Error(ErrorCode::ValidationError, "cap must be >= 1");
  std::vector<int> indices;
  if (n <= cap) {
    for (int i = 0; i < n; ++i) indices.push_back(i);
    return indices;
  }
  if (cap == 1) {
    indices.push_back(0);
    return indices;
  }
  for (int i = 0; i < cap; ++i) {
    indices.push_back(static_cast<int>(
        std::lround(static_cast<double>(i) * (n - 1) / (cap - 1))));
  }
  return indices;
}

std::vector<Frame> downsample(const std::vector<Frame>& frames, int cap) {
  const auto indices = downsample_indices(static_cast<int>(frames.size()), cap);
  if (indices.size() == frames.size()) return frames;
  std::vector<Frame> kept;
  kept.reserve(indices.size());
  for (int i : indices) kept.push_back(frames[static_cast<size_t>(i)]);
  return kept;
}

namespace {

// Structured stand-in for an RGB frame: enough state for a critic to do
// motion verification, state contrast and anomaly detection.
std::string render_summary(const WorldState& state, ViewKind view, long tick,
                           const std::vector<ExecutionEvent>& events) {
  json j;
  j["tick"] = tick;
  j["view"] = view_kind_name(view);
  j["robot"] = {{"x", state.base_x}, {"y", state.base_y}, {"heading", state.heading}};
  const Vec3 eef = state.eef_position();
  j["eef"] = {{"x", eef.x}, {"y", eef.y}, {"z", eef.z}};

  switch (view) {
    case ViewKind::Global: {
      json preds = json::array();
      for (const auto& [p, v] : snapshot_predicates(state)) {
        if (v) preds.push_back(p.key());
      }
      j["predicates"] = std::move(preds);
      break;
    }
    case ViewKind::Head: {
      json joints = json::object();
      for (const auto& [id, fraction] : state.joint_fractions) joints[id] = fraction;
      j["joints"] = std::move(joints);
      j["gripper"] = state.gripper == GripperState::Closed ? "closed" : "open";
      break;
    }
    case ViewKind::Wrist: {
      j["held"] = state.held_object ? json(*state.held_object) : json();
      j["handle"] = state.grasped_handle ? json(*state.grasped_handle) : json();
      break;
    }
  }

  json evs = json::array();
  for (const auto& e : events) {
    evs.push_back({{"kind", event_kind_name(e.kind)}, {"detail", e.detail}});
  }
  j["events"] = std::move(evs);
  return j.dump();
}

}  // namespace

std::string raster_frame(const WorldState& state, ViewKind view, int width, int height) {
  double cx = 0, cy = 0, span_x = 0, span_y = 0;
  switch (view) {
    case ViewKind::Global:
      span_x = state.scene->floor_extent.width;
      span_y = state.scene->floor_extent.height;
      cx = span_x / 2;
      cy = span_y / 2;
      break;
    case ViewKind::Head:
      span_x = span_y = 3.0;
      cx = state.base_x;
      cy = state.base_y;
      break;
    case ViewKind::Wrist: {
      span_x = span_y = 1.0;
      const Vec3 eef = state.eef_position();
      cx = eef.x;
      cy = eef.y;
      break;
    }
  }

  std::vector<int> grid(static_cast<size_t>(width) * height, 255);
  auto paint = [&](const Aabb& box, int shade) {
    for (int row = 0; row < height; ++row) {
      const double wy = cy - span_y / 2 + (row + 0.5) * span_y / height;
      for (int col = 0; col < width; ++col) {
        const double wx = cx - span_x / 2 + (col + 0.5) * span_x / width;
        if (box.contains_xy(wx, wy)) {
          int& cell = grid[static_cast<size_t>(row) * width + col];
          cell = std::min(cell, shade);
        }
      }
    }
  };

  for (const auto& obj : state.scene->objects) {
    const Aabb box = state.object_world_aabb(obj.id);
    paint(box, obj.object_class == ObjectClass::FixtureA ? 60 : 120);
    if (obj.articulation && state.joint_fraction(obj.id) > 0.0) {
      paint(obj.articulation->swept_volume, 180);
    }
  }
  const double hw = state.robot.base_footprint.width * state.robot.scale / 2;
  const double hh = state.robot.base_footprint.height * state.robot.scale / 2;
  paint({{state.base_x - hw, state.base_y - hh, 0}, {state.base_x + hw, state.base_y + hh, 1}},
        0);
  const Vec3 eef = state.eef_position();
  paint(Aabb::from_center_extents(eef, {0.08, 0.08, 0.08}), 30);

  std::string pgm = "P2\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  for (int row = 0; row < height; ++row) {
    for (int col = 0; col < width; ++col) {
      if (col > 0) pgm += ' ';
      pgm += std::to_string(grid[static_cast<size_t>(row) * width + col]);
    }
    pgm += '\n';
  }
  return pgm;
}

ObservationSet capture(const ExecutionTrace& trace, const EvolutionConfig& config) {
  config.validate();
  std::vector<std::map<ViewKind, std::vector<Frame>>> steps;
  steps.reserve(trace.steps.size());

  for (const auto& step : trace.steps) {
    const long end_tick = step.post_state.tick;
    const long start_tick = end_tick - step.duration_ticks;
    const int raw_count = static_cast<int>(
        std::ceil(static_cast<double>(step.duration_ticks) / config.p2));

    std::map<ViewKind, std::vector<Frame>> per_view;
    for (ViewKind view : config.views) {
      std::vector<Frame> frames;
      frames.reserve(static_cast<size_t>(std::max(raw_count, 1)));
      for (int i = 0; i < std::max(raw_count, 1); ++i) {
        const long tick = std::min(start_tick + static_cast<long>(i) * config.p2, end_tick);
        frames.push_back({tick, view,
                          config.raster_frames
                              ? raster_frame(step.post_state, view)
                              : render_summary(step.post_state, view, tick, step.events)});
      }
      per_view[view] = downsample(frames, config.max_frames_per_action);
    }
    steps.push_back(std::move(per_view));
  }
  return ObservationSet(std::move(steps), config);
}

std::map<ViewKind, std::vector<Frame>> window(const ObservationSet& obs, int step_1based,
                                              int p1) {
  if (step_1based < 1 || step_1based > obs.step_count()) {
    throw Error(ErrorCode::StepOutOfRange,
                "step " + std::to_string(step_1based) + " outside 1.." +
                    std::to_string(obs.step_count()));
  }
  const int first = std::max(step_1based - p1, 1);
  std::map<ViewKind, std::vector<Frame>> out;
  for (int s = first; s <= step_1based; ++s) {
    for (const auto& [view, frames] : obs.step(s)) {
      auto& dst = out[view];
      dst.insert(dst.end(), frames.begin(), frames.end());
    }
  }
  return out;
}

}  // namespace taskworld
