#include "taskworld/taskgen.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "taskworld/world.hpp"

namespace taskworld {

namespace {

// Arm-clearance radius: a pick target this close to a door's swing region
// makes the planner manage the arm with RETREAT around it.
constexpr double kRetreatClearance = 0.9;

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    const char lc = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (std::isalnum(static_cast<unsigned char>(lc)) || lc == '_') {
      current += lc;
    } else if (!current.empty()) {
      tokens.push_back(current);
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(current);
  return tokens;
}

bool is_stopword(const std::string& t) {
  static const std::set<std::string> kStop = {"the", "a", "an", "my", "this", "that", "up"};
  return kStop.count(t) > 0;
}

std::string resolve_synonym(const std::string& token) {
  if (token == "fridge") return "refrigerator";
  return token;
}

const ObjectSpec* resolve_token(const std::string& token, const SceneConfig& scene) {
  const std::string t = resolve_synonym(token);
  if (const ObjectSpec* byid = scene.find(t)) return byid;
  for (const auto& obj : scene.objects) {
    if (obj.category == t) return &obj;
  }
  return nullptr;
}

bool looks_like_object_word(const std::string& token) {
  static const std::set<std::string> kVerbsAndPreps = {
      "put",  "place", "transport", "transfer", "move", "pick", "open",
      "close", "into",  "in",        "inside",   "onto", "on",   "from"};
  return !is_stopword(token) && !kVerbsAndPreps.count(token);
}

struct ParsedKeyword {
  enum class Kind { PlaceInside, PlaceOnto, Pick, Open, Close } kind;
  const ObjectSpec* item = nullptr;     // X
  const ObjectSpec* support = nullptr;  // Y / F
};

const ObjectSpec* resolve_object_word(const std::vector<std::string>& tokens, size_t from,
                                      size_t to, const SceneConfig& scene) {
  for (size_t i = from; i < to && i < tokens.size(); ++i) {
    if (!looks_like_object_word(tokens[i])) continue;
    const ObjectSpec* obj = resolve_token(tokens[i], scene);
    if (!obj) {
      throw Error(ErrorCode::UnresolvedObject,
                  "keyword names '" + tokens[i] + "' but the scene has no such object");
    }
    return obj;
  }
  return nullptr;
}

ParsedKeyword parse_keyword(const TaskKeyword& keyword, const SceneConfig& scene) {
  if (keyword.text.empty()) {
    throw Error(ErrorCode::ValidationError, "keyword text is empty");
  }
  const std::vector<std::string> tokens = tokenize(keyword.text);

  auto index_of = [&](std::initializer_list<const char*> words) -> std::optional<size_t> {
    for (size_t i = 0; i < tokens.size(); ++i) {
      for (const char* w : words) {
        if (tokens[i] == w) return i;
      }
    }
    return std::nullopt;
  };

  if (auto verb = index_of({"put", "place", "transport", "transfer", "move"})) {
    const auto into = index_of({"into", "in", "inside"});
    const auto onto = index_of({"onto", "on"});
    const auto prep = into ? into : onto;
    if (prep && *prep > *verb) {
      ParsedKeyword parsed;
      parsed.kind = into ? ParsedKeyword::Kind::PlaceInside : ParsedKeyword::Kind::PlaceOnto;
      parsed.item = resolve_object_word(tokens, *verb + 1, *prep, scene);
      parsed.support = resolve_object_word(tokens, *prep + 1, tokens.size(), scene);
      if (!parsed.item || !parsed.support) {
        throw Error(ErrorCode::NoTemplate,
                    "placement keyword needs both an item and a destination");
      }
      return parsed;
    }
  }
  if (auto verb = index_of({"pick", "grab", "take"})) {
    ParsedKeyword parsed;
    parsed.kind = ParsedKeyword::Kind::Pick;
    parsed.item = resolve_object_word(tokens, *verb + 1, tokens.size(), scene);
    if (!parsed.item) throw Error(ErrorCode::NoTemplate, "pick keyword names no item");
    return parsed;
  }
  if (auto verb = index_of({"open", "close"})) {
    ParsedKeyword parsed;
    parsed.kind =
        tokens[*verb] == "open" ? ParsedKeyword::Kind::Open : ParsedKeyword::Kind::Close;
    parsed.support = resolve_object_word(tokens, *verb + 1, tokens.size(), scene);
    if (!parsed.support) throw Error(ErrorCode::NoTemplate, "articulation keyword names no fixture");
    return parsed;
  }
  throw Error(ErrorCode::NoTemplate,
              "keyword '" + keyword.text + "' matches no recognized pattern");
}

bool fixture_starts_closed(const ObjectSpec& spec) {
  return spec.articulation &&
         spec.articulation->joint_fraction < spec.articulation->open_threshold;
}

}  // namespace

std::optional<std::string> resting_surface(const SceneConfig& scene, const std::string& id) {
  auto world = make_world(std::make_shared<const SceneConfig>(scene));
  for (const auto& other : scene.objects) {
    if (other.id == id) continue;
    if (evaluate_predicate(world, Predicate::on_top(id, other.id))) return other.id;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// TemplatePlanner

ExpandResult TemplatePlanner::expand(const TaskKeyword& keyword, const SceneConfig& scene) {
  const ParsedKeyword parsed = parse_keyword(keyword, scene);
  ExpandResult out;
  std::ostringstream detail;

  switch (parsed.kind) {
    case ParsedKeyword::Kind::PlaceInside: {
      const std::string& x = parsed.item->category;
      const std::string& y = parsed.support->category;
      if (fixture_starts_closed(*parsed.support)) {
        out.name = "open_the_" + y + "_and_put_the_" + x + "_into_the_" + y;
        detail << "This is a " << scene.scene_id << " scene. There is a " << parsed.item->id
               << " resting in the room and a closed " << parsed.support->id
               << ". The task is to put the " << parsed.item->id << " into the "
               << parsed.support->id << ". The robot must first open the "
               << parsed.support->id << ", then pick up the " << parsed.item->id
               << ", place it inside, and finally close the " << parsed.support->id << ".";
      } else {
        out.name = "pick_up_" + x + "_and_put_into_" + y;
        detail << "This is a " << scene.scene_id << " scene. The task is to pick up the "
               << parsed.item->id << " and place it inside the " << parsed.support->id
               << ". The robot must approach and grasp the " << parsed.item->id
               << ", carry it over to the " << parsed.support->id
               << " and release it inside.";
      }
      break;
    }
    case ParsedKeyword::Kind::PlaceOnto: {
      out.name = "put_the_" + parsed.item->category + "_on_the_" + parsed.support->category;
      detail << "This is a " << scene.scene_id << " scene. The task is to place the "
             << parsed.item->id << " onto the " << parsed.support->id
             << ". The robot must grasp the " << parsed.item->id
             << ", move it over the " << parsed.support->id
             << " surface and set it down gently.";
      break;
    }
    case ParsedKeyword::Kind::Pick: {
      out.name = "pick_up_" + parsed.item->category;
      detail << "This is a " << scene.scene_id << " scene. The task is to pick up the "
             << parsed.item->id << ". The robot must approach, grasp and lift it.";
      break;
    }
    case ParsedKeyword::Kind::Open:
    case ParsedKeyword::Kind::Close: {
      const bool open = parsed.kind == ParsedKeyword::Kind::Open;
      out.name = std::string(open ? "open_" : "close_") + parsed.support->category;
      detail << "This is a " << scene.scene_id << " scene. The task is to "
             << (open ? "open" : "close") << " the " << parsed.support->id
             << " by operating its handle.";
      break;
    }
  }
  out.detail = detail.str();
  return out;
}

namespace {

// Splits "open_the_<F>_and_put_the_<X>_into_the_<F>"-style names back into
// their object words.
std::optional<std::string> slice_between(const std::string& name, const std::string& before,
                                         const std::string& after) {
  const auto start = name.find(before);
  if (start == std::string::npos) return std::nullopt;
  const auto from = start + before.size();
  const auto end = after.empty() ? name.size() : name.find(after, from);
  if (end == std::string::npos) return std::nullopt;
  return name.substr(from, end - from);
}

const ObjectSpec& resolve_or_throw(const std::string& word, const SceneConfig& scene) {
  const ObjectSpec* obj = resolve_token(word, scene);
  if (!obj) {
    throw Error(ErrorCode::InvalidDecomposition,
                "task name references '" + word + "' which resolves to no scene object");
  }
  return *obj;
}

SubtaskConfig make_config(std::string name, std::string description, std::string target,
                          std::optional<std::string> s1, std::optional<std::string> s2,
                          std::string category) {
  SubtaskConfig c;
  c.name = std::move(name);
  c.description = std::move(description);
  c.target_id = std::move(target);
  c.support_init_id = std::move(s1);
  c.support_goal_id = std::move(s2);
  c.bddl_category = std::move(category);
  return c;
}

SubtaskConfig pick_config(const ObjectSpec& item, const SceneConfig& scene) {
  const auto surface = resting_surface(scene, item.id);
  if (!surface) {
    throw Error(ErrorCode::InvalidDecomposition,
                "pick target '" + item.id + "' rests on no surface");
  }
  return make_config("pick_up_" + item.category,
                     "Navigate to the " + item.id + ", grasp it and lift it off the " +
                         *surface + ".",
                     item.id, surface, surface, item.category);
}

}  // namespace

std::vector<SubtaskConfig> TemplatePlanner::decompose(const std::string& name,
                                                      const std::string& detail,
                                                      const SceneConfig& scene) {
  (void)detail;  // the template path is fully determined by the name
  std::vector<SubtaskConfig> configs;

  if (auto fixture_word = slice_between(name, "open_the_", "_and_put_the_")) {
    const auto item_word = slice_between(name, "_and_put_the_", "_into_the_");
    if (!item_word) {
      throw Error(ErrorCode::InvalidDecomposition, "malformed placement task name: " + name);
    }
    const ObjectSpec& fixture = resolve_or_throw(*fixture_word, scene);
    const ObjectSpec& item = resolve_or_throw(*item_word, scene);
    configs.push_back(make_config(
        "open_" + fixture.category, "Open the " + fixture.id + " by its handle.", fixture.id,
        std::nullopt, std::nullopt, fixture.category));
    configs.push_back(pick_config(item, scene));
    configs.push_back(make_config(
        "put_" + item.category + "_into_" + fixture.category,
        "Carry the " + item.id + " to the " + fixture.id + " and release it inside.", item.id,
        kGripperAtom, fixture.id, item.category));
    configs.push_back(make_config(
        "close_" + fixture.category, "Close the " + fixture.id + " door.", fixture.id,
        std::nullopt, std::nullopt, fixture.category));
    return configs;
  }

  if (auto item_word = slice_between(name, "pick_up_", "_and_put_into_")) {
    const auto dest_word = slice_between(name, "_and_put_into_", "");
    const ObjectSpec& item = resolve_or_throw(*item_word, scene);
    const ObjectSpec& dest = resolve_or_throw(*dest_word, scene);
    configs.push_back(pick_config(item, scene));
    configs.push_back(make_config(
        "put_" + item.category + "_into_" + dest.category,
        "Carry the " + item.id + " over to the " + dest.id + " and release it inside.",
        item.id, kGripperAtom, dest.id, item.category));
    return configs;
  }

  if (auto item_word = slice_between(name, "put_the_", "_on_the_")) {
    const auto dest_word = slice_between(name, "_on_the_", "");
    const ObjectSpec& item = resolve_or_throw(*item_word, scene);
    const ObjectSpec& dest = resolve_or_throw(*dest_word, scene);
    configs.push_back(pick_config(item, scene));
    configs.push_back(make_config(
        "put_" + item.category + "_on_" + dest.category,
        "Carry the " + item.id + " over to the " + dest.id + " and set it down on top.",
        item.id, kGripperAtom, dest.id, item.category));
    return configs;
  }

  if (auto item_word = slice_between(name, "pick_up_", "")) {
    configs.push_back(pick_config(resolve_or_throw(*item_word, scene), scene));
    return configs;
  }

  for (const char* prefix : {"open_", "close_"}) {
    if (name.rfind(prefix, 0) == 0) {
      const std::string word = name.substr(std::string(prefix).size());
      const ObjectSpec& fixture = resolve_or_throw(word, scene);
      configs.push_back(make_config(name,
                                    std::string(prefix) + std::string("operate the ") +
                                        fixture.id + " by its handle.",
                                    fixture.id, std::nullopt, std::nullopt, fixture.category));
      return configs;
    }
  }

  throw Error(ErrorCode::InvalidDecomposition, "unrecognized task name '" + name + "'");
}

// ---------------------------------------------------------------------------
// Subtask instantiation and flow templates

SimpleTask instantiate_subtask(const SubtaskConfig& config, const SceneConfig& scene) {
  if (config.target_id.empty()) {
    throw Error(ErrorCode::InvalidDecomposition, "subtask '" + config.name + "' has no target");
  }
  if (!scene.has(config.target_id)) {
    throw Error(ErrorCode::InvalidDecomposition,
                "subtask '" + config.name + "' targets unknown object '" + config.target_id +
                    "'");
  }
  auto check_support = [&](const std::optional<std::string>& id) {
    if (id && *id != kGripperAtom && !scene.has(*id)) {
      throw Error(ErrorCode::InvalidDecomposition,
                  "subtask '" + config.name + "' references unknown object '" + *id + "'");
    }
  };
  check_support(config.support_init_id);
  check_support(config.support_goal_id);

  SimpleTask task;
  task.name = config.name;
  task.description = config.description;
  task.target = config.target_id;
  task.support_init = config.support_init_id;
  task.support_goal = config.support_goal_id;
  task.bddl_category = config.bddl_category;

  const std::string& n = config.name;
  if (n.rfind("open_", 0) == 0) {
    task.init = {Predicate::open(task.target, true)};
    task.goal = {Predicate::open(task.target)};
  } else if (n.rfind("close_", 0) == 0) {
    task.init = {Predicate::open(task.target)};
    task.goal = {Predicate::open(task.target, true)};
  } else if (n.rfind("pick_up_", 0) == 0) {
    if (!task.support_init) {
      throw Error(ErrorCode::InvalidDecomposition,
                  "pick subtask '" + n + "' needs an initial support");
    }
    task.init = {Predicate::on_top(task.target, *task.support_init)};
    task.goal = {Predicate::on_top(task.target, *task.support_init, true)};
  } else if (n.rfind("put_", 0) == 0 && n.find("_into_") != std::string::npos) {
    if (!task.support_goal) {
      throw Error(ErrorCode::InvalidDecomposition,
                  "placement subtask '" + n + "' needs a goal support");
    }
    task.init = {Predicate::in_gripper(task.target)};
    task.goal = {Predicate::inside(task.target, *task.support_goal)};
  } else if (n.rfind("put_", 0) == 0 && n.find("_on_") != std::string::npos) {
    if (!task.support_goal) {
      throw Error(ErrorCode::InvalidDecomposition,
                  "placement subtask '" + n + "' needs a goal support");
    }
    task.init = {Predicate::in_gripper(task.target)};
    task.goal = {Predicate::on_top(task.target, *task.support_goal)};
  } else {
    throw Error(ErrorCode::InvalidDecomposition,
                "subtask name '" + n + "' matches no boundary template");
  }
  task.validate();
  return task;
}

namespace {

double distance_to_box_xy(const Vec3& p, const Aabb& box) {
  const double dx = std::max({box.lo.x - p.x, 0.0, p.x - box.hi.x});
  const double dy = std::max({box.lo.y - p.y, 0.0, p.y - box.hi.y});
  return std::hypot(dx, dy);
}

// A door swing region with a manipulable item nearby forces conservative
// arm management around it.
bool door_conflicts_with_items(const ObjectSpec& fixture, const SceneConfig& scene) {
  if (!fixture.articulation) return false;
  for (const auto& obj : scene.objects) {
    if (obj.object_class != ObjectClass::ManipulableB) continue;
    if (distance_to_box_xy(obj.position, fixture.articulation->swept_volume) <
        kRetreatClearance) {
      return true;
    }
  }
  return false;
}

bool item_near_any_door(const ObjectSpec& item, const SceneConfig& scene) {
  for (const auto& obj : scene.objects) {
    if (!obj.articulation) continue;
    if (distance_to_box_xy(item.position, obj.articulation->swept_volume) <
        kRetreatClearance) {
      return true;
    }
  }
  return false;
}

PrimitiveAction articulate_action(PrimitiveKind kind, const ObjectSpec& fixture) {
  const double threshold =
      fixture.articulation ? fixture.articulation->open_threshold : 0.5;
  if (kind == PrimitiveKind::ArticulateOpen) {
    if (threshold <= 0.5) return PrimitiveAction::make(kind);  // default sentinel
    return PrimitiveAction::make(kind, 0.0, threshold);
  }
  if (threshold <= 0.5) return PrimitiveAction::make(kind, 0.0, 0.5);
  return PrimitiveAction::make(kind, 0.0, threshold);
}

}  // namespace

ActionFlow plan_initial_flow(const SimpleTask& subtask, const SceneConfig& scene) {
  if (subtask.goal.size() != 1) {
    throw Error(ErrorCode::NoTemplate,
                "flow templates cover single-predicate goals only ('" + subtask.name + "')");
  }
  const Predicate& goal = subtask.goal.front();
  const ObjectSpec& target = scene.get(subtask.target);
  ActionFlow flow;

  const bool open_goal = goal.name == PredicateName::Open && !goal.negated;
  const bool close_goal = goal.name == PredicateName::Open && goal.negated;
  const bool pick_goal = goal.name == PredicateName::OnTop && goal.negated;
  const bool place_inside = goal.name == PredicateName::Inside && !goal.negated;
  const bool place_ontop = goal.name == PredicateName::OnTop && !goal.negated;

  if (open_goal || close_goal) {
    if (subtask.requires_navigation) {
      flow.push_back(PrimitiveAction::make(PrimitiveKind::NavigateToTarget));
    }
    flow.push_back(PrimitiveAction::make(PrimitiveKind::Approach));
    flow.push_back(PrimitiveAction::make(PrimitiveKind::Converge));
    flow.push_back(PrimitiveAction::make(PrimitiveKind::Grasp));
    flow.push_back(articulate_action(
        open_goal ? PrimitiveKind::ArticulateOpen : PrimitiveKind::ArticulateClose, target));
    flow.push_back(PrimitiveAction::make(PrimitiveKind::Ungrasp));
    if (open_goal && door_conflicts_with_items(target, scene)) {
      flow.push_back(PrimitiveAction::make(PrimitiveKind::Retreat));
    }
    return flow;
  }

  if (pick_goal) {
    if (subtask.requires_navigation) {
      flow.push_back(PrimitiveAction::make(PrimitiveKind::NavigateToTarget));
      if (item_near_any_door(target, scene)) {
        flow.push_back(PrimitiveAction::make(PrimitiveKind::Retreat));
      }
    }
    flow.push_back(PrimitiveAction::make(PrimitiveKind::Approach));
    flow.push_back(PrimitiveAction::make(PrimitiveKind::Converge));
    flow.push_back(PrimitiveAction::make(PrimitiveKind::Grasp));
    flow.push_back(PrimitiveAction::make(PrimitiveKind::LiftEefUp, 0.2));
    return flow;
  }

  if (place_inside || place_ontop) {
    if (!subtask.support_goal) {
      throw Error(ErrorCode::NoTemplate, "placement flow needs a goal support");
    }
    const ObjectSpec& support = scene.get(*subtask.support_goal);
    flow.push_back(PrimitiveAction::make(PrimitiveKind::NavigateToSupport));
    flow.push_back(PrimitiveAction::make(PrimitiveKind::MoveBaseForward, 0.4));
    flow.push_back(PrimitiveAction::make(PrimitiveKind::MoveEefForward, 0.1));
    // Dropping into a hollow fixture relies on gravity; open containers and
    // bare surfaces need the lowering move to clear the rim / settle softly.
    if (place_ontop || support.object_class == ObjectClass::ManipulableB) {
      flow.push_back(PrimitiveAction::make(PrimitiveKind::LiftEefDown, 0.3));
    }
    flow.push_back(PrimitiveAction::make(PrimitiveKind::Ungrasp));
    return flow;
  }

  throw Error(ErrorCode::NoTemplate,
              "no flow template for goal shape " + goal.to_sexpr());
}

// ---------------------------------------------------------------------------
// Free-function stages

namespace {

bool looks_like_scene_id(const std::string& token) {
  const auto underscore = token.rfind('_');
  if (underscore == std::string::npos || underscore + 1 >= token.size()) return false;
  for (size_t i = underscore + 1; i < token.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(token[i]))) return false;
  }
  return true;
}

}  // namespace

ExpandResult expand(const TaskKeyword& keyword, const SceneConfig& scene, Planner& planner) {
  if (keyword.text.empty()) {
    throw Error(ErrorCode::ValidationError, "keyword text is empty");
  }
  ExpandResult result = planner.expand(keyword, scene);
  if (result.name.empty() || result.detail.empty()) {
    throw Error(ErrorCode::ValidationError, "planner returned an empty expansion");
  }
  for (const auto& token : tokenize(result.name)) {
    if (looks_like_scene_id(token) && !scene.has(token)) {
      throw Error(ErrorCode::UnresolvedObject,
                  "expanded name references '" + token + "' which is not in the scene");
    }
  }
  return result;
}

ComplexTask decompose(const std::string& name, const std::string& detail,
                      const SceneConfig& scene, Planner& planner) {
  const std::vector<SubtaskConfig> configs = planner.decompose(name, detail, scene);
  if (configs.empty()) {
    throw Error(ErrorCode::InvalidDecomposition, "planner produced zero subtasks");
  }

  ComplexTask plan;
  plan.name = name;
  plan.detail = detail;
  for (size_t k = 0; k < configs.size(); ++k) {
    SimpleTask task = instantiate_subtask(configs[k], scene);
    task.requires_navigation = k > 0 && configs[k].target_id != configs[k - 1].target_id;
    plan.subtasks.push_back(std::move(task));
  }
  for (size_t k = 0; k + 1 < plan.subtasks.size(); ++k) {
    const ActionFlow prev_flow = plan_initial_flow(plan.subtasks[k], scene);
    const ActionFlow next_flow = plan_initial_flow(plan.subtasks[k + 1], scene);
    ActionTransfer transfer;
    transfer.prev_target = plan.subtasks[k].target;
    transfer.next_target = plan.subtasks[k + 1].target;
    transfer.end_action = prev_flow.back().kind;
    transfer.start_action = next_flow.front().kind;
    plan.transfers.push_back(transfer);
  }
  plan.validate();
  return plan;
}

GenerationBundle generate(const TaskKeyword& keyword, const SceneConfig& scene,
                          Planner& planner, ScaleRounding rounding) {
  ExpandResult expansion;
  try {
    expansion = expand(keyword, scene, planner);
  } catch (const Error& e) {
    throw Error(e.code(), std::string("stage I (expand): ") + e.what());
  }

  GenerationBundle bundle;
  try {
    bundle.plan = decompose(expansion.name, expansion.detail, scene, planner);
  } catch (const Error& e) {
    throw Error(e.code(), std::string("stage II (decompose): ") + e.what());
  }

  try {
    const RobotConfig robot;
    for (const auto& subtask : bundle.plan.subtasks) {
      bundle.flows.push_back(plan_initial_flow(subtask, scene));
      const double factor = adjust_object_scale(scene.get(subtask.target), robot, rounding);
      bundle.scales.emplace(subtask.target, factor);  // first occurrence wins
    }
  } catch (const Error& e) {
    throw Error(e.code(), std::string("stage III (instantiate): ") + e.what());
  }

  // The opening boundary is a contract with the scene, not a wish.
  auto world = make_world(std::make_shared<const SceneConfig>(scene));
  if (!evaluate_conjunction(world, bundle.plan.subtasks.front().init)) {
    throw Error(ErrorCode::ValidationError,
                "first subtask init does not hold in the scene: " +
                    conjunction_to_string(bundle.plan.subtasks.front().init));
  }
  return bundle;
}

// ---------------------------------------------------------------------------
// RemotePlanner

namespace {

nlohmann::json scene_summary(const SceneConfig& scene) {
  nlohmann::json objs = nlohmann::json::array();
  for (const auto& obj : scene.objects) {
    objs.push_back({{"id", obj.id},
                    {"category", obj.category},
                    {"class", obj.object_class == ObjectClass::FixtureA ? "A" : "B"},
                    {"pos", {obj.position.x, obj.position.y, obj.position.z}},
                    {"bbox", {obj.bbox_extents.x, obj.bbox_extents.y, obj.bbox_extents.z}}});
  }
  return {{"scene_id", scene.scene_id}, {"objects", std::move(objs)}};
}

std::optional<std::string> optional_string(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  const std::string value = j.at(key).get<std::string>();
  if (value.empty()) return std::nullopt;
  return value;
}

}  // namespace

ExpandResult RemotePlanner::expand(const TaskKeyword& keyword, const SceneConfig& scene) {
  nlohmann::json body = {{"stage", "expand"},
                         {"keyword", keyword.text},
                         {"scene", scene_summary(scene)},
                         {"prior", nullptr}};
  const nlohmann::json reply = post_json(endpoint_, body, ErrorCode::PlannerUnavailable);
  if (!reply.contains("task_activity_name") || !reply.contains("task_detail_message")) {
    throw Error(ErrorCode::ParseError,
                "expand reply lacks task_activity_name/task_detail_message");
  }
  return {reply.at("task_activity_name").get<std::string>(),
          reply.at("task_detail_message").get<std::string>()};
}

std::vector<SubtaskConfig> RemotePlanner::decompose(const std::string& name,
                                                    const std::string& detail,
                                                    const SceneConfig& scene) {
  nlohmann::json body = {{"stage", "decompose"},
                         {"keyword", nullptr},
                         {"scene", scene_summary(scene)},
                         {"prior", {{"task_activity_name", name},
                                    {"task_detail_message", detail}}}};
  const nlohmann::json reply = post_json(endpoint_, body, ErrorCode::PlannerUnavailable);
  const nlohmann::json* list = nullptr;
  if (reply.is_array()) {
    list = &reply;
  } else if (reply.contains("subtasks") && reply.at("subtasks").is_array()) {
    list = &reply.at("subtasks");
  } else {
    throw Error(ErrorCode::ParseError, "decompose reply carries no subtask list");
  }

  std::vector<SubtaskConfig> configs;
  for (const auto& entry : *list) {
    SubtaskConfig c;
    c.name = entry.value("name", std::string{});
    c.description = entry.value("description", std::string{});
    c.target_id = entry.value("target_id", std::string{});
    c.support_init_id = optional_string(entry, "support_init_id");
    c.support_goal_id = optional_string(entry, "support_goal_id");
    c.bddl_category = entry.value("bddl_category", std::string{});
    configs.push_back(std::move(c));
  }
  return configs;
}

}  // namespace taskworld
