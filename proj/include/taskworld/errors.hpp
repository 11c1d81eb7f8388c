#pragma once

#include <stdexcept>
#include <string>

namespace taskworld {

// Stable error taxonomy shared by every module. The CLI maps these onto
// exit codes, tests assert on them.
enum class ErrorCode {
  ParseError,
  ValidationError,
  UnknownCategory,
  UnknownObject,
  InvalidParam,
  MissingContext,
  EmptyGoal,
  EmptyFlow,
  SliceViolation,
  UnresolvedObject,
  InvalidDecomposition,
  NoTemplate,
  BddlParseError,
  PlannerUnavailable,
  CriticUnavailable,
  MisalignedObservations,
  RepeatedProposal,
  InitUnsatisfied,
  UnknownActionId,
  ParamShapeMismatch,
  EmptySequence,
  StepOutOfRange,
  EmptyBatch,
  IoError,
  ConfigError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::string field_path = {})
      : std::runtime_error(compose(code, message, field_path)),
        code_(code),
        field_path_(std::move(field_path)) {}

  ErrorCode code() const { return code_; }

  // Offending field for validation failures, e.g. "objects[2].bbox".
  const std::string& field_path() const { return field_path_; }

 private:
  static std::string compose(ErrorCode code, const std::string& message,
                             const std::string& field_path) {
    std::string out = std::string(error_code_name(code)) + ": " + message;
    if (!field_path.empty()) out += " (at " + field_path + ")";
    return out;
  }

  ErrorCode code_;
  std::string field_path_;
};

}  // namespace taskworld
