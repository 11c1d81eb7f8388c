#include "taskworld/primitives.hpp"

#include <cstdio>

namespace taskworld {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::UnknownCategory: return "UnknownCategory";
    case ErrorCode::UnknownObject: return "UnknownObject";
    case ErrorCode::InvalidParam: return "InvalidParam";
    case ErrorCode::MissingContext: return "MissingContext";
    case ErrorCode::EmptyGoal: return "EmptyGoal";
    case ErrorCode::EmptyFlow: return "EmptyFlow";
    case ErrorCode::SliceViolation: return "SliceViolation";
    case ErrorCode::UnresolvedObject: return "UnresolvedObject";
    case ErrorCode::InvalidDecomposition: return "InvalidDecomposition";
    case ErrorCode::NoTemplate: return "NoTemplate";
    case ErrorCode::BddlParseError: return "BddlParseError";
    case ErrorCode::PlannerUnavailable: return "PlannerUnavailable";
    case ErrorCode::CriticUnavailable: return "CriticUnavailable";
    case ErrorCode::MisalignedObservations: return "MisalignedObservations";
    case ErrorCode::RepeatedProposal: return "RepeatedProposal";
    case ErrorCode::InitUnsatisfied: return "InitUnsatisfied";
    case ErrorCode::UnknownActionId: return "UnknownActionId";
    case ErrorCode::ParamShapeMismatch: return "ParamShapeMismatch";
    case ErrorCode::EmptySequence: return "EmptySequence";
    case ErrorCode::StepOutOfRange: return "StepOutOfRange";
    case ErrorCode::EmptyBatch: return "EmptyBatch";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Error";
}

const PrimitiveInfo& primitive_info(PrimitiveKind kind) {
  for (const auto& info : kPrimitiveTable) {
    if (info.kind == kind) return info;
  }
  throw Error(ErrorCode::InvalidParam, "unknown primitive kind");
}

const PrimitiveInfo* primitive_by_wire_id(int id) {
  for (const auto& info : kPrimitiveTable) {
    if (info.wire_id == id) return &info;
  }
  return nullptr;
}

const PrimitiveInfo* primitive_by_name(std::string_view name) {
  for (const auto& info : kPrimitiveTable) {
    if (info.name == name) return &info;
  }
  return nullptr;
}

PrimitiveAction PrimitiveAction::make(PrimitiveKind kind) {
  PrimitiveAction a;
  a.kind = kind;
  a.validate();
  return a;
}

PrimitiveAction PrimitiveAction::make(PrimitiveKind kind, double scalar) {
  PrimitiveAction a;
  a.kind = kind;
  a.scalar = scalar;
  a.validate();
  return a;
}

PrimitiveAction PrimitiveAction::make(PrimitiveKind kind, double range_min, double range_max) {
  PrimitiveAction a;
  a.kind = kind;
  a.range = RangeParam{range_min, range_max};
  a.validate();
  return a;
}

void PrimitiveAction::validate() const {
  const auto& info = primitive_info(kind);
  const std::string name(info.name);
  switch (info.shape) {
    case ParamShape::None:
      if (scalar || range) {
        throw Error(ErrorCode::InvalidParam, name + " takes no parameter");
      }
      break;
    case ParamShape::ScalarMeters:
    case ParamShape::ScalarDegrees:
      if (!scalar || range) {
        throw Error(ErrorCode::InvalidParam, name + " takes a single scalar");
      }
      break;
    case ParamShape::Range:
      // Empty = default sentinel [0, 1].
      if (scalar) {
        throw Error(ErrorCode::InvalidParam, name + " takes a [min, max] range");
      }
      if (range) {
        if (range->min < 0.0 || range->max > 1.0 || range->min > range->max) {
          throw Error(ErrorCode::InvalidParam,
                      name + " range must satisfy 0 <= min <= max <= 1");
        }
      }
      break;
  }
}

RangeParam PrimitiveAction::effective_range() const {
  return range.value_or(RangeParam{0.0, 1.0});
}

std::string format_param(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

namespace {

// Meters and joint ranges always carry a decimal point ("0.0", "0.45");
// degrees stay plain ("45").
std::string format_decimal(double v) {
  std::string s = format_param(v);
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos) {
    s += ".0";
  }
  return s;
}

}  // namespace

std::string PrimitiveAction::to_string() const {
  const auto& info = primitive_info(kind);
  std::string out(info.name);
  switch (info.shape) {
    case ParamShape::None:
      break;
    case ParamShape::ScalarMeters:
      out += "(" + format_decimal(*scalar) + ")";
      break;
    case ParamShape::ScalarDegrees:
      out += "(" + format_param(*scalar) + ")";
      break;
    case ParamShape::Range:
      if (range) {
        out += "(" + format_decimal(range->min) + ", " + format_decimal(range->max) + ")";
      }
      break;
  }
  return out;
}

std::string flow_to_string(const ActionFlow& flow, std::string_view sep) {
  std::string out;
  for (size_t i = 0; i < flow.size(); ++i) {
    if (i > 0) out += sep;
    out += flow[i].to_string();
  }
  return out;
}

}  // namespace taskworld
