#include "taskworld/wire.hpp"

namespace taskworld {

using nlohmann::json;

json encode_action(const PrimitiveAction& action) {
  action.validate();
  const PrimitiveInfo& info = primitive_info(action.kind);
  const std::string id = std::to_string(info.wire_id);
  switch (info.shape) {
    case ParamShape::None:
      return info.wire_id;
    case ParamShape::ScalarMeters:
    case ParamShape::ScalarDegrees:
      return json{{id, *action.scalar}};
    case ParamShape::Range:
      if (!action.range) return info.wire_id;  // default sentinel
      return json{{id, json::array({action.range->min, action.range->max})}};
  }
  return info.wire_id;
}

json encode_flow(const ActionFlow& flow) {
  json out = json::array();
  for (const auto& a : flow) out.push_back(encode_action(a));
  return out;
}

namespace {

const PrimitiveInfo& info_for_id(int id) {
  const PrimitiveInfo* info = primitive_by_wire_id(id);
  if (!info) {
    throw Error(ErrorCode::UnknownActionId, "no primitive with wire id " + std::to_string(id));
  }
  return *info;
}

}  // namespace

PrimitiveAction decode_action(const json& entry) {
  if (entry.is_number_integer()) {
    const PrimitiveInfo& info = info_for_id(entry.get<int>());
    if (info.shape == ParamShape::ScalarMeters || info.shape == ParamShape::ScalarDegrees) {
      throw Error(ErrorCode::ParamShapeMismatch,
                  std::string(info.name) + " requires a scalar parameter");
    }
    PrimitiveAction a;
    a.kind = info.kind;
    return a;  // parameter-free, or articulate default sentinel
  }
  if (entry.is_object() && entry.size() == 1) {
    const auto it = entry.begin();
    int id = 0;
    try {
      id = std::stoi(it.key());
    } catch (const std::exception&) {
      throw Error(ErrorCode::UnknownActionId, "non-numeric action id '" + it.key() + "'");
    }
    const PrimitiveInfo& info = info_for_id(id);
    const json& value = it.value();
    PrimitiveAction a;
    a.kind = info.kind;
    switch (info.shape) {
      case ParamShape::None:
        throw Error(ErrorCode::ParamShapeMismatch,
                    std::string(info.name) + " takes no parameter");
      case ParamShape::ScalarMeters:
      case ParamShape::ScalarDegrees:
        if (!value.is_number()) {
          throw Error(ErrorCode::ParamShapeMismatch,
                      std::string(info.name) + " requires a numeric parameter");
        }
        a.scalar = value.get<double>();
        return a;
      case ParamShape::Range:
        if (!value.is_array() || value.size() != 2 || !value[0].is_number() ||
            !value[1].is_number()) {
          throw Error(ErrorCode::ParamShapeMismatch,
                      std::string(info.name) + " requires a [min, max] range");
        }
        a.range = RangeParam{value[0].get<double>(), value[1].get<double>()};
        a.validate();
        return a;
    }
  }
  throw Error(ErrorCode::ParamShapeMismatch,
              "wire entries must be a bare id or a single-key {id: param} object");
}

ActionFlow decode_flow(const json& wire) {
  if (!wire.is_array()) {
    throw Error(ErrorCode::ParamShapeMismatch, "wire flow must be a JSON array");
  }
  if (wire.empty()) throw Error(ErrorCode::EmptySequence, "wire flow is empty");
  ActionFlow flow;
  flow.reserve(wire.size());
  for (const auto& entry : wire) flow.push_back(decode_action(entry));
  return flow;
}

}  // namespace taskworld
