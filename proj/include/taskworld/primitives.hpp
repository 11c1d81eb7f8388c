#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "taskworld/errors.hpp"

namespace taskworld {

// The 21 atomic primitive skills. Order is the canonical enumeration order
// used everywhere a deterministic listing is required.
enum class PrimitiveKind {
  Approach,
  Converge,
  Grasp,
  Ungrasp,
  Retreat,
  NavigateToTarget,
  NavigateToSupport,
  LiftEefUp,
  LiftEefDown,
  MoveEefForward,
  MoveEefBackward,
  MoveEefLeft,
  MoveEefRight,
  MoveBaseForward,
  MoveBaseBackward,
  MoveBaseLeft,
  MoveBaseRight,
  TurnBaseLeft,
  TurnBaseRight,
  ArticulateOpen,
  ArticulateClose,
};

inline constexpr int kPrimitiveCount = 21;

enum class ParamShape {
  None,          // context-aware, solver-resolved
  ScalarMeters,  // translation distance
  ScalarDegrees, // base rotation
  Range,         // normalized joint sweep [min, max], or default sentinel
};

struct PrimitiveInfo {
  PrimitiveKind kind;
  int wire_id;          // integer ID used by the new_sequence codec
  std::string_view name;
  ParamShape shape;
  int duration_ticks;
  bool wire_id_anchored; // false for IDs completed by structural inference
};

// Wire-codec ID map, version 1. Single source of truth: the codec, the
// flow formatter and the executor all read this table. ID 6 is reserved
// and unassigned.
inline constexpr std::array<PrimitiveInfo, kPrimitiveCount> kPrimitiveTable = {{
    {PrimitiveKind::Approach, 1, "APPROACH", ParamShape::None, 4, true},
    {PrimitiveKind::Converge, 2, "CONVERGE", ParamShape::None, 4, true},
    {PrimitiveKind::Grasp, 3, "GRASP", ParamShape::None, 2, true},
    {PrimitiveKind::Retreat, 4, "RETREAT", ParamShape::None, 4, false},
    {PrimitiveKind::Ungrasp, 5, "UNGRASP", ParamShape::None, 2, true},
    {PrimitiveKind::LiftEefUp, 7, "LIFT_EEF_UP", ParamShape::ScalarMeters, 4, false},
    {PrimitiveKind::LiftEefDown, 8, "LIFT_EEF_DOWN", ParamShape::ScalarMeters, 4, true},
    {PrimitiveKind::MoveEefForward, 9, "MOVE_EEF_FORWARD", ParamShape::ScalarMeters, 4, true},
    {PrimitiveKind::MoveEefBackward, 10, "MOVE_EEF_BACKWARD", ParamShape::ScalarMeters, 4, false},
    {PrimitiveKind::MoveEefLeft, 11, "MOVE_EEF_LEFT", ParamShape::ScalarMeters, 4, false},
    {PrimitiveKind::MoveEefRight, 12, "MOVE_EEF_RIGHT", ParamShape::ScalarMeters, 4, false},
    {PrimitiveKind::MoveBaseForward, 13, "MOVE_BASE_FORWARD", ParamShape::ScalarMeters, 4, true},
    {PrimitiveKind::MoveBaseBackward, 14, "MOVE_BASE_BACKWARD", ParamShape::ScalarMeters, 4, false},
    {PrimitiveKind::MoveBaseLeft, 15, "MOVE_BASE_LEFT", ParamShape::ScalarMeters, 4, true},
    {PrimitiveKind::MoveBaseRight, 16, "MOVE_BASE_RIGHT", ParamShape::ScalarMeters, 4, false},
    {PrimitiveKind::NavigateToTarget, 17, "NAVIGATE_TO_TARGET", ParamShape::None, 5, true},
    {PrimitiveKind::NavigateToSupport, 18, "NAVIGATE_TO_SUPPORT", ParamShape::None, 5, true},
    {PrimitiveKind::ArticulateClose, 19, "ARTICULATE_CLOSE", ParamShape::Range, 6, true},
    {PrimitiveKind::ArticulateOpen, 20, "ARTICULATE_OPEN", ParamShape::Range, 6, false},
    {PrimitiveKind::TurnBaseLeft, 21, "TURN_BASE_LEFT", ParamShape::ScalarDegrees, 4, false},
    {PrimitiveKind::TurnBaseRight, 22, "TURN_BASE_RIGHT", ParamShape::ScalarDegrees, 4, false},
}};

inline constexpr std::string_view kWireIdMapVersion = "1";

const PrimitiveInfo& primitive_info(PrimitiveKind kind);
const PrimitiveInfo* primitive_by_wire_id(int id);
const PrimitiveInfo* primitive_by_name(std::string_view name);

struct RangeParam {
  double min = 0.0;
  double max = 1.0;
  bool operator==(const RangeParam&) const = default;
};

// One parameterized primitive. Exactly one of the optionals is set for
// scalar/range kinds; both empty means parameter-free, and for articulate
// kinds the empty state is the default-range sentinel [0, 1].
struct PrimitiveAction {
  PrimitiveKind kind = PrimitiveKind::Approach;
  std::optional<double> scalar;
  std::optional<RangeParam> range;

  bool operator==(const PrimitiveAction&) const = default;

  static PrimitiveAction make(PrimitiveKind kind);
  static PrimitiveAction make(PrimitiveKind kind, double scalar);
  static PrimitiveAction make(PrimitiveKind kind, double range_min, double range_max);

  // Throws InvalidParam when the payload does not match the kind's shape.
  void validate() const;

  // Articulate kinds only: commanded range, default sentinel = [0, 1].
  RangeParam effective_range() const;

  // Table-style rendering, e.g. "MOVE_BASE_FORWARD(0.4)",
  // "ARTICULATE_CLOSE(0.0, 0.5)", "ARTICULATE_OPEN".
  std::string to_string() const;
};

using ActionFlow = std::vector<PrimitiveAction>;

std::string flow_to_string(const ActionFlow& flow, std::string_view sep = " -> ");

// Minimal decimal rendering used by to_string: trims trailing zeros but
// keeps one decimal for whole values, matching "0.4", "45", "(0.0, 0.5)".
std::string format_param(double v);

}  // namespace taskworld
