#include "taskworld/world.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "json.hpp"
#include "taskworld/wire.hpp"

namespace taskworld {

using nlohmann::json;
using KC = KinematicConstants;

const char* event_kind_name(EventKind kind) {
  switch (kind) {
    case EventKind::Collision: return "collision";
    case EventKind::DoorDisturbed: return "door_disturbed";
    case EventKind::GraspEmpty: return "grasp_empty";
    case EventKind::ObjectDropped: return "object_dropped";
    case EventKind::NavArrived: return "nav_arrived";
    case EventKind::JointMoved: return "joint_moved";
    case EventKind::TransferApplied: return "transfer_applied";
  }
  return "?";
}

Vec3 WorldState::eef_position() const {
  const Vec3 f = heading_forward(heading);
  const Vec3 l = heading_left(heading);
  return {base_x + f.x * eef_offset.forward + l.x * eef_offset.left,
          base_y + f.y * eef_offset.forward + l.y * eef_offset.left, eef_offset.up};
}

Vec3 WorldState::object_position(const std::string& id) const {
  auto it = object_poses.find(id);
  if (it == object_poses.end()) {
    throw Error(ErrorCode::UnknownObject, "no object '" + id + "' in world state");
  }
  return it->second.position;
}

Aabb WorldState::object_world_aabb(const std::string& id) const {
  const ObjectSpec& spec = scene->get(id);
  auto it = object_poses.find(id);
  if (it == object_poses.end()) {
    throw Error(ErrorCode::UnknownObject, "no object '" + id + "' in world state");
  }
  return yawed_box_aabb(it->second.position, spec.bbox_extents, it->second.yaw);
}

double WorldState::joint_fraction(const std::string& id) const {
  auto it = joint_fractions.find(id);
  return it == joint_fractions.end() ? 0.0 : it->second;
}

EefOffset WorldState::carry_pose() const {
  return {0.5 * robot.scale, 0.0, 1.15 * robot.scale};
}

namespace {

bool is_reserved_atom(const std::string& id) { return id == kGripperAtom || id == kRobotAtom; }

void require_object(const WorldState& state, const std::string& id) {
  if (is_reserved_atom(id)) return;
  if (!state.scene->has(id)) {
    throw Error(ErrorCode::UnknownObject, "no object '" + id + "' in scene");
  }
}

bool object_has_interior(const ObjectSpec& spec) {
  if (spec.object_class == ObjectClass::FixtureA) return spec.articulation.has_value();
  return spec.category == "bowl" || spec.category == "box" || spec.category == "cup";
}

// Containment volume: articulated fixtures are hollow boxes (walls of
// kWallThickness), manipulable containers count their whole bbox.
Aabb interior_volume(const WorldState& state, const std::string& id) {
  const ObjectSpec& spec = state.scene->get(id);
  Aabb box = state.object_world_aabb(id);
  if (spec.object_class == ObjectClass::FixtureA) {
    return box.shrunk(KC::kWallThickness);
  }
  return box;
}

// Dominant-axis outward direction of the object's front face.
Vec3 front_direction(const ObjectPose& pose) {
  const Vec3 f = heading_forward(pose.yaw);
  if (std::abs(f.x) >= std::abs(f.y)) return {f.x >= 0 ? 1.0 : -1.0, 0.0, 0.0};
  return {0.0, f.y >= 0 ? 1.0 : -1.0, 0.0};
}

// Interior extended far out through the front aperture: the column the eef
// may occupy when reaching into an open fixture (side/back/top walls still
// block).
Aabb interior_with_aperture(const WorldState& state, const std::string& id) {
  constexpr double kApertureReach = 10.0;
  Aabb interior = interior_volume(state, id);
  const Vec3 front = front_direction(state.object_poses.at(id));
  if (front.x > 0) interior.hi.x += kApertureReach;
  if (front.x < 0) interior.lo.x -= kApertureReach;
  if (front.y > 0) interior.hi.y += kApertureReach;
  if (front.y < 0) interior.lo.y -= kApertureReach;
  return interior;
}

Vec3 grasp_point(const WorldState& state, const ObjectSpec& spec) {
  const ObjectPose& pose = state.object_poses.at(spec.id);
  if (spec.object_class == ObjectClass::ManipulableB) return pose.position;
  if (spec.articulation && spec.articulation->handle) return *spec.articulation->handle;
  // Front-face center at half height.
  const Vec3 front = front_direction(pose);
  const Aabb box = yawed_box_aabb(pose.position, spec.bbox_extents, pose.yaw);
  const Vec3 half = box.extents() * 0.5;
  return {pose.position.x + front.x * half.x, pose.position.y + front.y * half.y,
          pose.position.z};
}

bool fixture_is_open(const WorldState& state, const ObjectSpec& spec) {
  if (!spec.articulation) return false;
  return state.joint_fraction(spec.id) >= spec.articulation->open_threshold;
}

}  // namespace

// ---------------------------------------------------------------------------
// Predicates

bool evaluate_predicate(const WorldState& state, const Predicate& p) {
  p.validate();
  bool value = false;
  switch (p.name) {
    case PredicateName::OnTop: {
      require_object(state, p.args[0]);
      require_object(state, p.args[1]);
      const Aabb a = state.object_world_aabb(p.args[0]);
      const Aabb b = state.object_world_aabb(p.args[1]);
      const Vec3 centroid = a.center();
      value = std::abs(a.lo.z - b.hi.z) <= KC::kOnTopEpsilonZ &&
              b.contains_xy(centroid.x, centroid.y);
      break;
    }
    case PredicateName::Inside: {
      require_object(state, p.args[0]);
      require_object(state, p.args[1]);
      const Aabb a = state.object_world_aabb(p.args[0]);
      value = interior_volume(state, p.args[1]).contains_box(a);
      break;
    }
    case PredicateName::Open: {
      require_object(state, p.args[0]);
      value = fixture_is_open(state, state.scene->get(p.args[0]));
      break;
    }
    case PredicateName::InGripper: {
      require_object(state, p.args[0]);
      value = state.held_object == p.args[0];
      break;
    }
    case PredicateName::InRoom: {
      const std::string& subject = p.args[0];
      const std::string& room = p.args[1];
      if (subject == kRobotAtom) {
        value = !state.scene->rooms.empty() && state.scene->rooms.front() == room;
      } else {
        require_object(state, subject);
        value = state.scene->get(subject).room == room;
      }
      break;
    }
  }
  return p.negated ? !value : value;
}

bool evaluate_conjunction(const WorldState& state, const Conjunction& c) {
  return std::all_of(c.begin(), c.end(),
                     [&](const Predicate& p) { return evaluate_predicate(state, p); });
}

bool evaluate_goal(const WorldState& state, const Conjunction& goal) {
  if (goal.empty()) throw Error(ErrorCode::EmptyGoal, "goal conjunction is empty");
  return evaluate_conjunction(state, goal);
}

PredicateSnapshot snapshot_predicates(const WorldState& state) {
  PredicateSnapshot snap;
  const auto& objects = state.scene->objects;
  for (const auto& a : objects) {
    for (const auto& b : objects) {
      if (a.id == b.id) continue;
      Predicate on = Predicate::on_top(a.id, b.id);
      snap.emplace_back(on, evaluate_predicate(state, on));
      Predicate in = Predicate::inside(a.id, b.id);
      snap.emplace_back(in, evaluate_predicate(state, in));
    }
  }
  for (const auto& o : objects) {
    if (o.articulation) {
      Predicate open = Predicate::open(o.id);
      snap.emplace_back(open, evaluate_predicate(state, open));
    }
  }
  for (const auto& o : objects) {
    Predicate grip = Predicate::in_gripper(o.id);
    snap.emplace_back(grip, evaluate_predicate(state, grip));
  }
  for (const auto& room : state.scene->rooms) {
    Predicate in_room = Predicate::in_room(kRobotAtom, room);
    snap.emplace_back(in_room, evaluate_predicate(state, in_room));
  }
  return snap;
}

// ---------------------------------------------------------------------------
// Robot volumes and collision sweeps

namespace {

Aabb base_volume(const WorldState& state, double x, double y) {
  const double hw = state.robot.base_footprint.width * state.robot.scale / 2;
  const double hh = state.robot.base_footprint.height * state.robot.scale / 2;
  return {{x - hw, y - hh, 0.0}, {x + hw, y + hh, 1.0 * state.robot.scale}};
}

Aabb eef_volume(const Vec3& eef) {
  return Aabb::from_center_extents(eef, {0.04, 0.04, 0.04});
}

// Checks a candidate robot pose (base and/or eef boxes) against static
// geometry. Manipulables never block; open fixtures let the eef through
// their front aperture column.
bool pose_blocked(const WorldState& state, const std::optional<Aabb>& base,
                  const std::optional<Aabb>& eef, std::string* contact) {
  if (base) {
    if (base->lo.x < 0 || base->lo.y < 0 || base->hi.x > state.scene->floor_extent.width ||
        base->hi.y > state.scene->floor_extent.height) {
      if (contact) *contact = "floor_bounds";
      return true;
    }
  }
  for (const auto& obj : state.scene->objects) {
    if (obj.object_class != ObjectClass::FixtureA) continue;
    const Aabb box = state.object_world_aabb(obj.id);
    if (base && base->intersects(box)) {
      if (contact) *contact = obj.id;
      return true;
    }
    if (eef && eef->intersects(box)) {
      if (object_has_interior(obj) && fixture_is_open(state, obj)) {
        const Aabb allowed = interior_with_aperture(state, obj.id);
        if (allowed.contains_box(*eef)) continue;
      }
      if (contact) *contact = obj.id;
      return true;
    }
  }
  return false;
}

}  // namespace

// ---------------------------------------------------------------------------
// Primitive execution

namespace {

struct Executor {
  WorldState& state;
  const TaskContext& ctx;
  std::vector<ExecutionEvent> events;

  void emit(EventKind kind, std::vector<std::string> subjects, std::string detail) {
    events.push_back({state.tick, kind, std::move(subjects), std::move(detail)});
  }

  void sync_held_object() {
    if (!state.held_object) return;
    auto& pose = state.object_poses.at(*state.held_object);
    pose.position = state.eef_position() + state.held_offset;
  }

  const ObjectSpec& context_object(bool want_support) const {
    if (want_support) {
      if (!ctx.support_goal) {
        throw Error(ErrorCode::MissingContext, "NAVIGATE_TO_SUPPORT needs a goal support id");
      }
      require_object(state, *ctx.support_goal);
      if (*ctx.support_goal == kGripperAtom) {
        throw Error(ErrorCode::MissingContext, "cannot navigate to the gripper pseudo-object");
      }
      return state.scene->get(*ctx.support_goal);
    }
    if (ctx.target.empty()) {
      throw Error(ErrorCode::MissingContext, "context-aware primitive needs a target id");
    }
    require_object(state, ctx.target);
    return state.scene->get(ctx.target);
  }

  // Standoff pose: kStandoffDistance x scale out from the nearest face of the
  // object's AABB, facing its centroid; slides backward out of any fixture
  // volume it would overlap.
  void navigate(const ObjectSpec& obj, double extra_standoff) {
    const Aabb box = state.object_world_aabb(obj.id);
    const Vec3 c = box.center();
    struct Face {
      Vec3 center;
      Vec3 normal;
    };
    const Face faces[4] = {
        {{box.hi.x, c.y, 0}, {1, 0, 0}},
        {{box.lo.x, c.y, 0}, {-1, 0, 0}},
        {{c.x, box.hi.y, 0}, {0, 1, 0}},
        {{c.x, box.lo.y, 0}, {0, -1, 0}},
    };
    const Face* nearest = &faces[0];
    double best = std::numeric_limits<double>::max();
    for (const auto& f : faces) {
      const double d = std::hypot(f.center.x - state.base_x, f.center.y - state.base_y);
      if (d < best - 1e-12) {
        best = d;
        nearest = &f;
      }
    }
    const double standoff = KC::kStandoffDistance * state.robot.scale + extra_standoff;
    double x = nearest->center.x + nearest->normal.x * standoff;
    double y = nearest->center.y + nearest->normal.y * standoff;
    for (int i = 0; i < 60; ++i) {
      const Aabb base = base_volume(state, x, y);
      std::string contact;
      if (!pose_blocked(state, base, std::nullopt, &contact)) break;
      x += nearest->normal.x * 0.05;
      y += nearest->normal.y * 0.05;
    }
    state.base_x = x;
    state.base_y = y;
    state.heading = std::atan2(c.y - y, c.x - x);
    state.eef_offset = state.carry_pose();
    sync_held_object();
    emit(EventKind::NavArrived, {obj.id}, "standoff");
  }

  // eef placement on the approach line: `back_off` metres behind the grasp
  // point along the base heading, at the grasp point's height.
  void place_eef_before(const Vec3& grasp, double back_off) {
    const Vec3 f = heading_forward(state.heading);
    const Vec3 l = heading_left(state.heading);
    const double dx = grasp.x - back_off * f.x - state.base_x;
    const double dy = grasp.y - back_off * f.y - state.base_y;
    state.eef_offset.forward = dx * f.x + dy * f.y;
    state.eef_offset.left = dx * l.x + dy * l.y;
    state.eef_offset.up = grasp.z;
    sync_held_object();
  }

  void disturb_door(const std::string& fixture) {
    double& fraction = state.joint_fractions.at(fixture);
    const double before = fraction;
    fraction = std::max(0.0, fraction - KC::kDoorDisturbanceDelta);
    emit(EventKind::Collision, {fixture}, "struck door swept volume");
    emit(EventKind::DoorDisturbed, {fixture},
         "joint " + format_param(before) + " -> " + format_param(fraction));
  }

  // Door strikes take effect immediately: the struck panel swings toward
  // closed mid-motion and may block the remainder of the sweep.
  void strike_doors(const std::optional<Aabb>& base, const std::optional<Aabb>& eef,
                    std::set<std::string>* already) {
    for (const auto& obj : state.scene->objects) {
      if (!obj.articulation || already->count(obj.id)) continue;
      if (state.joint_fraction(obj.id) <= 0.0) continue;
      const Aabb& door = obj.articulation->swept_volume;
      if ((base && base->intersects(door)) || (eef && eef->intersects(door))) {
        already->insert(obj.id);
        disturb_door(obj.id);
      }
    }
  }

  // Fixed-substep sweep shared by translations and turns: `pose_at` yields
  // candidate base/eef boxes at a travel fraction. Returns the admissible
  // fraction; emits collision/disturbance events along the way.
  double sweep(double total_distance,
               const std::function<void(double, std::optional<Aabb>*, std::optional<Aabb>*)>&
                   pose_at) {
    if (total_distance <= 0.0) return 1.0;
    const int substeps =
        std::max(1, static_cast<int>(std::ceil(total_distance / KC::kSweepStep)));
    std::set<std::string> struck;
    double admissible = 0.0;
    for (int i = 1; i <= substeps; ++i) {
      const double fraction = static_cast<double>(i) / substeps;
      std::optional<Aabb> base, eef;
      pose_at(fraction, &base, &eef);
      strike_doors(base, eef, &struck);
      std::string contact;
      if (pose_blocked(state, base, eef, &contact)) {
        emit(EventKind::Collision, {contact}, "stopped at contact");
        return admissible;
      }
      admissible = fraction;
    }
    return admissible;
  }

  void translate(bool move_base, const Vec3& dir_world, double distance) {
    const Vec3 eef0 = state.eef_position();
    const double bx0 = state.base_x, by0 = state.base_y;
    const EefOffset off0 = state.eef_offset;

    const double admissible =
        sweep(std::abs(distance),
              [&](double fraction, std::optional<Aabb>* base, std::optional<Aabb>* eef) {
                const Vec3 d = dir_world * (distance * fraction);
                if (move_base) *base = base_volume(state, bx0 + d.x, by0 + d.y);
                *eef = eef_volume(eef0 + d);
              });

    const Vec3 d = dir_world * (distance * admissible);
    if (move_base) {
      state.base_x = bx0 + d.x;
      state.base_y = by0 + d.y;
    } else {
      // Re-express the moved eef in the (unchanged) base frame.
      const Vec3 f = heading_forward(state.heading);
      const Vec3 l = heading_left(state.heading);
      state.eef_offset.forward = off0.forward + (d.x * f.x + d.y * f.y);
      state.eef_offset.left = off0.left + (d.x * l.x + d.y * l.y);
      state.eef_offset.up = off0.up + d.z;
    }
    sync_held_object();
  }

  void turn(double degrees) {
    const double delta = deg_to_rad(degrees);
    const double h0 = state.heading;
    const EefOffset off = state.eef_offset;

    auto eef_at = [&](double h) {
      const Vec3 f = heading_forward(h);
      const Vec3 l = heading_left(h);
      return Vec3{state.base_x + f.x * off.forward + l.x * off.left,
                  state.base_y + f.y * off.forward + l.y * off.left, off.up};
    };
    // Arc length of the eef path bounds the sweep resolution.
    const double arc = std::abs(delta) * std::hypot(off.forward, off.left);
    const double admissible =
        sweep(std::max(arc, 1e-6),
              [&](double fraction, std::optional<Aabb>* base, std::optional<Aabb>* eef) {
                *base = base_volume(state, state.base_x, state.base_y);
                *eef = eef_volume(eef_at(h0 + delta * fraction));
              });

    state.heading = h0 + delta * admissible;
    sync_held_object();
  }

  void grasp() {
    const ObjectSpec& target = context_object(false);
    state.gripper = GripperState::Closed;

    const Vec3 zone = state.eef_position() +
                      heading_forward(state.heading) * state.robot.converge_offset();
    if (target.object_class == ObjectClass::ManipulableB) {
      const Vec3 centroid = state.object_position(target.id);
      const bool in_reach = horizontal_distance(zone, centroid) <= KC::kGraspTolerance;
      const bool graspable = target.min_horizontal_extent() <= state.robot.gripper_max_width;
      const bool welded = state.faults.welded_targets.count(target.id) > 0;
      if (in_reach && graspable && !welded) {
        state.held_object = target.id;
        state.held_offset = centroid - state.eef_position();
        return;
      }
      std::string why = !in_reach     ? "target centroid outside grasp tolerance"
                        : !graspable  ? "target too wide for gripper"
                                      : "target immovable";
      emit(EventKind::GraspEmpty, {target.id}, why);
      return;
    }
    const Vec3 handle = grasp_point(state, target);
    if (horizontal_distance(zone, handle) <= KC::kGraspTolerance) {
      state.grasped_handle = target.id;
      return;
    }
    emit(EventKind::GraspEmpty, {target.id}, "handle outside grasp tolerance");
  }

  // Highest supporting plane directly below the released object's centroid:
  // container interiors when the object hangs inside their mouth, bbox tops
  // otherwise, the floor as fallback.
  void ungrasp() {
    state.gripper = GripperState::Open;
    state.grasped_handle.reset();
    if (!state.held_object) return;

    const std::string id = *state.held_object;
    state.held_object.reset();
    const ObjectSpec& spec = state.scene->get(id);
    auto& pose = state.object_poses.at(id);
    const Aabb box = yawed_box_aabb(pose.position, spec.bbox_extents, pose.yaw);
    const double half_height = box.extents().z / 2;
    const double center_z = pose.position.z;
    const double bottom = box.lo.z;

    double plane = 0.0;
    std::string support = "floor";
    for (const auto& other : state.scene->objects) {
      if (other.id == id) continue;
      const Aabb obox = state.object_world_aabb(other.id);
      // Released within a container's mouth: settle onto its inner floor.
      if (object_has_interior(other)) {
        const Aabb interior = interior_volume(state, other.id);
        if (interior.contains_xy(pose.position.x, pose.position.y) &&
            center_z >= interior.lo.z && bottom < obox.hi.z && interior.lo.z > plane) {
          plane = interior.lo.z;
          support = other.id;
          continue;
        }
      }
      // Released above a surface: settle onto its top face.
      if (obox.contains_xy(pose.position.x, pose.position.y) && center_z >= obox.hi.z &&
          obox.hi.z > plane) {
        plane = obox.hi.z;
        support = other.id;
      }
    }
    pose.position.z = plane + half_height;
    emit(EventKind::ObjectDropped, {id, support}, "settled");
  }

  void articulate(bool open, const PrimitiveAction& action) {
    if (!state.grasped_handle) {
      emit(EventKind::GraspEmpty, {}, "articulate without a held handle");
      return;
    }
    const std::string fixture = *state.grasped_handle;
    const ObjectSpec& spec = state.scene->get(fixture);
    if (!spec.articulation) {
      emit(EventKind::GraspEmpty, {fixture}, "fixture has no joint");
      return;
    }
    const RangeParam range = action.effective_range();
    double& fraction = state.joint_fractions.at(fixture);
    const double before = fraction;
    if (open) {
      fraction = std::clamp(range.max, 0.0, 1.0);
    } else {
      // A sweep whose upper limit barely clears the open threshold lacks the
      // authority to drive the door home; it leaves the residual opening.
      const double threshold = spec.articulation->open_threshold;
      if (range.max < threshold + KC::kCloseAuthorityMargin) {
        fraction = std::clamp(1.0 - (range.max - range.min), 0.0, 1.0);
      } else {
        fraction = std::clamp(range.min, 0.0, 1.0);
      }
    }
    emit(EventKind::JointMoved, {fixture},
         std::string(open ? "open" : "close") + " " + format_param(before) + " -> " +
             format_param(fraction));
  }
};

}  // namespace

std::vector<ExecutionEvent> apply_primitive(WorldState& state, const PrimitiveAction& action,
                                            const TaskContext& ctx) {
  action.validate();
  const PrimitiveInfo& info = primitive_info(action.kind);
  state.tick += info.duration_ticks;

  Executor exec{state, ctx, {}};
  const Vec3 fwd = heading_forward(state.heading);
  const Vec3 left = heading_left(state.heading);

  switch (action.kind) {
    case PrimitiveKind::NavigateToTarget:
      exec.navigate(exec.context_object(false), 0.0);
      break;
    case PrimitiveKind::NavigateToSupport:
      exec.navigate(exec.context_object(true), state.faults.support_standoff_extra);
      break;
    case PrimitiveKind::Approach:
      exec.place_eef_before(grasp_point(state, exec.context_object(false)),
                            KC::kApproachOffset);
      break;
    case PrimitiveKind::Converge:
      exec.place_eef_before(grasp_point(state, exec.context_object(false)),
                            state.robot.converge_offset());
      break;
    case PrimitiveKind::Grasp:
      exec.grasp();
      break;
    case PrimitiveKind::Ungrasp:
      exec.ungrasp();
      break;
    case PrimitiveKind::Retreat:
      state.eef_offset = state.carry_pose();
      exec.sync_held_object();
      break;
    case PrimitiveKind::LiftEefUp:
      exec.translate(false, {0, 0, 1}, *action.scalar);
      break;
    case PrimitiveKind::LiftEefDown:
      exec.translate(false, {0, 0, -1}, *action.scalar);
      break;
    case PrimitiveKind::MoveEefForward:
      exec.translate(false, fwd, *action.scalar);
      break;
    case PrimitiveKind::MoveEefBackward:
      exec.translate(false, fwd * -1.0, *action.scalar);
      break;
    case PrimitiveKind::MoveEefLeft:
      exec.translate(false, left, *action.scalar);
      break;
    case PrimitiveKind::MoveEefRight:
      exec.translate(false, left * -1.0, *action.scalar);
      break;
    case PrimitiveKind::MoveBaseForward:
      exec.translate(true, fwd, *action.scalar);
      break;
    case PrimitiveKind::MoveBaseBackward:
      exec.translate(true, fwd * -1.0, *action.scalar);
      break;
    case PrimitiveKind::MoveBaseLeft:
      exec.translate(true, left, *action.scalar);
      break;
    case PrimitiveKind::MoveBaseRight:
      exec.translate(true, left * -1.0, *action.scalar);
      break;
    case PrimitiveKind::TurnBaseLeft:
      exec.turn(*action.scalar);
      break;
    case PrimitiveKind::TurnBaseRight:
      exec.turn(-*action.scalar);
      break;
    case PrimitiveKind::ArticulateOpen:
      exec.articulate(true, action);
      break;
    case PrimitiveKind::ArticulateClose:
      exec.articulate(false, action);
      break;
  }

  for (const auto& e : exec.events) state.event_log.push_back(e);
  return exec.events;
}

// ---------------------------------------------------------------------------
// Flow execution

namespace {

std::map<std::string, bool> snapshot_map(const WorldState& state) {
  std::map<std::string, bool> m;
  for (const auto& [p, v] : snapshot_predicates(state)) m[p.key()] = v;
  return m;
}

IdPair pair_for(const Predicate& p) {
  switch (p.name) {
    case PredicateName::OnTop:
    case PredicateName::Inside: {
      std::string a = p.args[0], b = p.args[1];
      if (a > b) std::swap(a, b);
      return {a, b};
    }
    case PredicateName::Open:
      return {p.args[0], p.args[0]};
    case PredicateName::InGripper: {
      std::string a = p.args[0], b = kGripperAtom;
      if (a > b) std::swap(a, b);
      return {a, b};
    }
    case PredicateName::InRoom:
      return {std::string(kRobotAtom), std::string(kRobotAtom)};
  }
  return {};
}

}  // namespace

ExecutionTrace execute_flow(const WorldState& state, const ActionFlow& flow,
                            const SimpleTask& task) {
  if (flow.empty()) throw Error(ErrorCode::EmptyFlow, "action flow is empty");
  task.validate();
  require_object(state, task.target);
  if (task.support_init) require_object(state, *task.support_init);
  if (task.support_goal) require_object(state, *task.support_goal);

  ExecutionTrace trace;
  trace.initial_state = state;

  WorldState current = state;
  const TaskContext ctx = TaskContext::from(task);

  auto prev_snapshot = snapshot_map(current);
  const PredicateSnapshot initial_preds = snapshot_predicates(current);
  const bool init_holds_at_start = evaluate_conjunction(current, task.init);

  for (const auto& action : flow) {
    const long tick_before = current.tick;
    auto events = apply_primitive(current, action, ctx);

    StepRecord step;
    step.action = action;
    step.events = std::move(events);
    step.duration_ticks = static_cast<int>(current.tick - tick_before);
    step.post_state = current;

    auto snapshot = snapshot_map(current);
    for (const auto& [key, value] : snapshot) {
      auto it = prev_snapshot.find(key);
      if (it != prev_snapshot.end() && it->second != value) {
        // Recover the predicate identity from the initial enumeration.
        for (const auto& [p, unused] : initial_preds) {
          if (p.key() == key) {
            trace.changed_pairs.insert(pair_for(p));
            break;
          }
        }
      }
    }
    prev_snapshot = std::move(snapshot);

    if (!trace.delta1_tick && init_holds_at_start &&
        !evaluate_conjunction(current, task.init)) {
      trace.delta1_tick = current.tick;
    }
    if (!trace.delta2_tick && evaluate_conjunction(current, task.goal)) {
      trace.delta2_tick = current.tick;
    }
    trace.steps.push_back(std::move(step));
  }

  trace.success = evaluate_goal(current, task.goal);
  return trace;
}

bool ExecutionTrace::has_collision_events() const {
  for (const auto& step : steps) {
    for (const auto& e : step.events) {
      if (e.kind == EventKind::Collision || e.kind == EventKind::DoorDisturbed) return true;
    }
  }
  return false;
}

WorldState apply_transfer(const WorldState& state, const ActionTransfer& transfer) {
  require_object(state, transfer.prev_target);
  require_object(state, transfer.next_target);
  WorldState next = state;
  next.tick += 1;
  next.event_log.push_back({next.tick,
                            EventKind::TransferApplied,
                            {transfer.prev_target, transfer.next_target},
                            "context switch"});
  return next;
}

WorldState make_world(std::shared_ptr<const SceneConfig> scene, RobotConfig robot,
                      FaultSpec faults, const std::optional<std::string>& start_target) {
  WorldState state;
  state.scene = std::move(scene);
  state.robot = robot;
  state.faults = std::move(faults);
  for (const auto& obj : state.scene->objects) {
    state.object_poses[obj.id] = {obj.position, obj.yaw};
    if (obj.articulation) {
      state.joint_fractions[obj.id] = obj.articulation->joint_fraction;
    }
  }
  state.base_x = state.scene->floor_extent.width / 2;
  state.base_y = state.scene->floor_extent.height / 2;
  state.eef_offset = state.carry_pose();
  if (start_target) {
    Executor exec{state, TaskContext{*start_target, std::nullopt, std::nullopt}, {}};
    exec.navigate(state.scene->get(*start_target), 0.0);
    state.event_log.clear();  // spawn placement, not an executed primitive
  }
  return state;
}

std::string trace_to_jsonl(const ExecutionTrace& trace, const std::string& scene_id,
                           const std::string& task_name) {
  std::string out;
  json header;
  header["scene_id"] = scene_id;
  header["task"] = task_name;
  header["success"] = trace.success;
  out += header.dump() + "\n";

  auto prev = snapshot_map(trace.initial_state);
  for (const auto& step : trace.steps) {
    json line;
    line["tick"] = step.post_state.tick;
    line["action"] = encode_action(step.action);
    json events = json::array();
    for (const auto& e : step.events) {
      events.push_back({{"kind", event_kind_name(e.kind)},
                        {"subjects", e.subjects},
                        {"detail", e.detail}});
    }
    line["events"] = std::move(events);
    json changed = json::array();
    auto snapshot = snapshot_map(step.post_state);
    for (const auto& [key, value] : snapshot) {
      auto it = prev.find(key);
      if (it != prev.end() && it->second != value) {
        changed.push_back({{"predicate", key}, {"now", value}});
      }
    }
    prev = std::move(snapshot);
    line["predicates_changed"] = std::move(changed);
    out += line.dump() + "\n";
  }
  return out;
}

}  // namespace taskworld
