#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "taskworld/world.hpp"

namespace taskworld {

enum class ViewKind { Global, Head, Wrist };

const char* view_kind_name(ViewKind view);

struct EvolutionConfig {
  int tau_max = 5;
  int p1 = 1;                     // look-back window in steps
  int p2 = 1;                     // frame sampling period in ticks
  int max_frames_per_action = 6;
  std::set<ViewKind> views = {ViewKind::Global, ViewKind::Head};
  bool raster_frames = false;     // PGM occupancy images instead of state summaries

  void validate() const;
};

struct Frame {
  long tick = 0;
  ViewKind view = ViewKind::Global;
  std::string payload;  // deterministic structured state summary
};

// Per-step multi-view frame sets. Step indices are 1-based, matching the
// temporal dimension of flow embeddings.
class ObservationSet {
 public:
  ObservationSet() = default;
  ObservationSet(std::vector<std::map<ViewKind, std::vector<Frame>>> steps,
                 EvolutionConfig config)
      : steps_(std::move(steps)), config_(std::move(config)) {}

  int step_count() const { return static_cast<int>(steps_.size()); }
  const EvolutionConfig& config() const { return config_; }

  // Throws StepOutOfRange.
  const std::map<ViewKind, std::vector<Frame>>& step(int index_1based) const;

 private:
  std::vector<std::map<ViewKind, std::vector<Frame>>> steps_;
  EvolutionConfig config_;
};

// Uniform downsample keeping first and last: indices round(i*(n-1)/(cap-1)).
std::vector<Frame> downsample(const std::vector<Frame>& frames, int cap);
std::vector<int> downsample_indices(int n, int cap);

// Top-down occupancy raster (ASCII PGM). Global covers the floor in the
// fixed world frame, Head a base-following window, Wrist an eef-centred
// crop.
std::string raster_frame(const WorldState& state, ViewKind view, int width = 64,
                         int height = 64);

// One frame set per executed step: ceil(duration/p2) raw frames per view,
// capped by uniform downsampling. Pure function of the trace.
ObservationSet capture(const ExecutionTrace& trace, const EvolutionConfig& config);

// Frames of steps max(step-p1, 1)..step, per view, order-preserving.
std::map<ViewKind, std::vector<Frame>> window(const ObservationSet& obs, int step_1based,
                                              int p1);

}  // namespace taskworld
