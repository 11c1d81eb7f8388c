#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "taskworld/geometry.hpp"

namespace taskworld {

enum class ObjectClass {
  FixtureA,      // fixed / articulated fixtures, operated via handles
  ManipulableB,  // items that must fit inside the gripper
};

enum class JointKind { Revolute, Prismatic };

struct ArticulationSpec {
  JointKind joint_kind = JointKind::Revolute;
  double joint_fraction = 0.0;  // normalized, 0 = fully closed
  Aabb swept_volume;            // world-frame box occupied by the moving part when ajar
  double open_threshold = 0.5;  // fraction at which the `open` predicate holds
  std::optional<Vec3> handle;   // grasp point; default = front-face center at half height
};

struct ObjectSpec {
  std::string id;
  std::string category;
  ObjectClass object_class = ObjectClass::ManipulableB;
  Vec3 bbox_extents;
  Vec3 position;  // bbox centroid, world frame
  double yaw = 0.0;
  std::optional<ArticulationSpec> articulation;
  std::string room;

  Aabb world_aabb() const { return yawed_box_aabb(position, bbox_extents, yaw); }
  double min_horizontal_extent() const { return std::min(bbox_extents.x, bbox_extents.y); }
};

struct RobotConfig {
  double scale = 0.7;
  double gripper_max_width = 0.06;
  double ideal_grasp_width = 0.05;
  Rect2 base_footprint{0.30, 0.30};  // pre-scale, meters
  double eef_reach = 1.1;

  double converge_offset() const { return 0.14 * scale; }
};

struct SceneConfig {
  std::string scene_id;
  Rect2 floor_extent;  // floor spans [0, width] x [0, height]
  std::vector<std::string> rooms;
  std::vector<ObjectSpec> objects;

  const ObjectSpec* find(const std::string& id) const;
  // Throws UnknownObject.
  const ObjectSpec& get(const std::string& id) const;
  bool has(const std::string& id) const { return find(id) != nullptr; }
};

// Reads and validates a scene document. IDs are canonicalized to lowercase.
// Throws ParseError for malformed files, ValidationError with the offending
// field path for invariant violations.
SceneConfig load_scene(const std::string& path);
SceneConfig parse_scene(const std::string& json_text);
std::string serialize_scene(const SceneConfig& scene);

// Category-list classification; explicit annotation in the file overrides.
// Throws UnknownCategory when the category is in neither list.
ObjectClass classify_object(const std::string& category,
                            std::optional<ObjectClass> annotation = std::nullopt);

enum class ScaleRounding {
  TwoDecimals,  // default, reproduces 0.37 / 0.42-style factors
  Grid005,      // snap to the nearest 0.05
};

// Graspability scale factor: 1.0 for fixtures and items already within
// gripper width, ideal_grasp_width / d_min otherwise, rounded per policy.
double adjust_object_scale(const ObjectSpec& spec, const RobotConfig& robot,
                           ScaleRounding rounding = ScaleRounding::TwoDecimals);

// Shrinks each listed object's bbox uniformly about its footprint center,
// keeping the bottom face height so resting contacts survive rescaling.
SceneConfig apply_scales(const SceneConfig& scene, const std::map<std::string, double>& scales);

}  // namespace taskworld
