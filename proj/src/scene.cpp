#include "taskworld/scene.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "taskworld/errors.hpp"

namespace taskworld {

using nlohmann::json;

namespace {

const std::set<std::string> kFixtureCategories = {
    "refrigerator", "cabinet", "microwave", "oven", "drawer", "dishwasher", "table"};

const std::set<std::string> kManipulableCategories = {
    "cup",  "glass",  "apple", "bottle", "box",  "bowl",       "knife", "plate",
    "mug",  "orange", "banana", "can",   "book", "teddy_bear", "die"};

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

Vec3 vec3_from(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) {
    throw Error(ErrorCode::ParseError, "expected [x, y, z]", path);
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json vec3_to(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

}  // namespace

const ObjectSpec* SceneConfig::find(const std::string& id) const {
  for (const auto& o : objects) {
    if (o.id == id) return &o;
  }
  return nullptr;
}

const ObjectSpec& SceneConfig::get(const std::string& id) const {
  const ObjectSpec* o = find(id);
  if (!o) throw Error(ErrorCode::UnknownObject, "no object '" + id + "' in scene");
  return *o;
}

ObjectClass classify_object(const std::string& category, std::optional<ObjectClass> annotation) {
  if (annotation) return *annotation;
  const std::string cat = lowercase(category);
  if (kFixtureCategories.count(cat)) return ObjectClass::FixtureA;
  if (kManipulableCategories.count(cat)) return ObjectClass::ManipulableB;
  throw Error(ErrorCode::UnknownCategory,
              "category '" + category + "' is neither a known fixture nor a known item");
}

double adjust_object_scale(const ObjectSpec& spec, const RobotConfig& robot,
                           ScaleRounding rounding) {
  if (spec.object_class == ObjectClass::FixtureA) return 1.0;
  const double d_min = spec.min_horizontal_extent();
  if (d_min <= robot.gripper_max_width) return 1.0;
  const double raw = robot.ideal_grasp_width / d_min;
  double s = 0.0;
  switch (rounding) {
    case ScaleRounding::TwoDecimals:
      s = std::round(raw * 100.0) / 100.0;
      break;
    case ScaleRounding::Grid005:
      s = std::round(raw / 0.05) * 0.05;
      break;
  }
  return std::min(1.0, std::max(0.01, s));
}

SceneConfig apply_scales(const SceneConfig& scene, const std::map<std::string, double>& scales) {
  SceneConfig out = scene;
  for (auto& obj : out.objects) {
    auto it = scales.find(obj.id);
    if (it == scales.end() || it->second == 1.0) continue;
    const double s = it->second;
    const double bottom = obj.position.z - obj.bbox_extents.z / 2;
    obj.bbox_extents = obj.bbox_extents * s;
    obj.position.z = bottom + obj.bbox_extents.z / 2;
  }
  return out;
}

namespace {

ArticulationSpec parse_articulation(const json& j, const std::string& path) {
  ArticulationSpec art;
  const std::string kind = j.value("kind", "revolute");
  if (kind == "revolute") {
    art.joint_kind = JointKind::Revolute;
  } else if (kind == "prismatic") {
    art.joint_kind = JointKind::Prismatic;
  } else {
    throw Error(ErrorCode::ParseError, "articulation kind must be revolute|prismatic",
                path + ".kind");
  }
  art.joint_fraction = j.value("fraction", 0.0);
  if (art.joint_fraction < 0.0 || art.joint_fraction > 1.0) {
    throw Error(ErrorCode::ValidationError, "joint fraction must lie in [0, 1]",
                path + ".fraction");
  }
  if (!j.contains("swept_box")) {
    throw Error(ErrorCode::ParseError, "articulation requires swept_box", path);
  }
  const json& sb = j.at("swept_box");
  if (!sb.is_array() || sb.size() != 2) {
    throw Error(ErrorCode::ParseError, "swept_box must be [[x0,y0,z0],[x1,y1,z1]]",
                path + ".swept_box");
  }
  art.swept_volume.lo = vec3_from(sb[0], path + ".swept_box[0]");
  art.swept_volume.hi = vec3_from(sb[1], path + ".swept_box[1]");
  if (!art.swept_volume.valid()) {
    throw Error(ErrorCode::ValidationError, "swept_box corners out of order",
                path + ".swept_box");
  }
  art.open_threshold = j.value("open_threshold", 0.5);
  if (art.open_threshold <= 0.0 || art.open_threshold >= 1.0) {
    throw Error(ErrorCode::ValidationError, "open_threshold must lie in (0, 1)",
                path + ".open_threshold");
  }
  if (j.contains("handle") && !j.at("handle").is_null()) {
    art.handle = vec3_from(j.at("handle"), path + ".handle");
  }
  return art;
}

json articulation_to(const ArticulationSpec& art) {
  json j;
  j["kind"] = art.joint_kind == JointKind::Revolute ? "revolute" : "prismatic";
  j["fraction"] = art.joint_fraction;
  j["swept_box"] = json::array({vec3_to(art.swept_volume.lo), vec3_to(art.swept_volume.hi)});
  j["open_threshold"] = art.open_threshold;
  if (art.handle) j["handle"] = vec3_to(*art.handle);
  return j;
}

void validate_scene(const SceneConfig& scene) {
  if (scene.objects.empty()) {
    throw Error(ErrorCode::ValidationError, "scene has no objects", "objects");
  }
  std::set<std::string> seen;
  for (size_t i = 0; i < scene.objects.size(); ++i) {
    const auto& obj = scene.objects[i];
    const std::string path = "objects[" + std::to_string(i) + "]";
    if (obj.id.empty()) {
      throw Error(ErrorCode::ValidationError, "object id must be non-empty", path + ".id");
    }
    if (!seen.insert(obj.id).second) {
      throw Error(ErrorCode::ValidationError, "duplicate object id '" + obj.id + "'",
                  path + ".id");
    }
    if (obj.bbox_extents.x <= 0 || obj.bbox_extents.y <= 0 || obj.bbox_extents.z <= 0) {
      throw Error(ErrorCode::ValidationError, "bbox extents must be strictly positive",
                  path + ".bbox");
    }
    if (obj.articulation && obj.object_class != ObjectClass::FixtureA) {
      throw Error(ErrorCode::ValidationError,
                  "articulation is only valid on class-A fixtures", path + ".articulation");
    }
    const Aabb box = obj.world_aabb();
    if (box.lo.x < 0 || box.lo.y < 0 || box.hi.x > scene.floor_extent.width ||
        box.hi.y > scene.floor_extent.height) {
      throw Error(ErrorCode::ValidationError,
                  "object '" + obj.id + "' extends beyond the floor extent", path + ".pos");
    }
  }
}

}  // namespace

SceneConfig parse_scene(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "scene document must be an object");

  SceneConfig scene;
  try {
    scene.scene_id = doc.at("scene_id").get<std::string>();
    const json& fe = doc.at("floor_extent");
    if (!fe.is_array() || fe.size() != 2) {
      throw Error(ErrorCode::ParseError, "floor_extent must be [w, h]", "floor_extent");
    }
    scene.floor_extent = {fe[0].get<double>(), fe[1].get<double>()};
    for (const auto& r : doc.value("rooms", json::array())) {
      scene.rooms.push_back(lowercase(r.get<std::string>()));
    }
    const json& objs = doc.at("objects");
    for (size_t i = 0; i < objs.size(); ++i) {
      const json& jo = objs[i];
      const std::string path = "objects[" + std::to_string(i) + "]";
      ObjectSpec obj;
      obj.id = lowercase(jo.at("id").get<std::string>());
      obj.category = lowercase(jo.at("category").get<std::string>());
      obj.bbox_extents = vec3_from(jo.at("bbox"), path + ".bbox");
      obj.position = vec3_from(jo.at("pos"), path + ".pos");
      obj.yaw = jo.value("yaw", 0.0);
      obj.room = lowercase(jo.value("room", std::string{}));
      std::optional<ObjectClass> annotation;
      if (jo.contains("class") && !jo.at("class").is_null()) {
        const std::string cls = jo.at("class").get<std::string>();
        if (cls == "A") {
          annotation = ObjectClass::FixtureA;
        } else if (cls == "B") {
          annotation = ObjectClass::ManipulableB;
        } else {
          throw Error(ErrorCode::ParseError, "class must be \"A\", \"B\" or null",
                      path + ".class");
        }
      }
      obj.object_class = classify_object(obj.category, annotation);
      if (jo.contains("articulation") && !jo.at("articulation").is_null()) {
        obj.articulation = parse_articulation(jo.at("articulation"), path + ".articulation");
      }
      scene.objects.push_back(std::move(obj));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }

  validate_scene(scene);
  return scene;
}

SceneConfig load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open scene file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scene(ss.str());
}

std::string serialize_scene(const SceneConfig& scene) {
  json doc;
  doc["scene_id"] = scene.scene_id;
  doc["floor_extent"] = json::array({scene.floor_extent.width, scene.floor_extent.height});
  doc["rooms"] = scene.rooms;
  json objs = json::array();
  for (const auto& obj : scene.objects) {
    json jo;
    jo["id"] = obj.id;
    jo["category"] = obj.category;
    jo["class"] = obj.object_class == ObjectClass::FixtureA ? "A" : "B";
    jo["bbox"] = vec3_to(obj.bbox_extents);
    jo["pos"] = vec3_to(obj.position);
    jo["yaw"] = obj.yaw;
    jo["room"] = obj.room;
    jo["articulation"] = obj.articulation ? articulation_to(*obj.articulation) : json(nullptr);
    objs.push_back(std::move(jo));
  }
  doc["objects"] = std::move(objs);
  return doc.dump(2) + "\n";
}

}  // namespace taskworld
