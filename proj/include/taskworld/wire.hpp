#pragma once

#include "json.hpp"
#include "taskworld/primitives.hpp"

namespace taskworld {

// new_sequence codec. Parameter-free actions (and articulate kinds with the
// default sentinel) encode as bare integer IDs; scalar params as {"ID": x};
// ranges as {"ID": [min, max]}.
nlohmann::json encode_action(const PrimitiveAction& action);
nlohmann::json encode_flow(const ActionFlow& flow);

// Exact inverse. Throws UnknownActionId, ParamShapeMismatch, EmptySequence.
PrimitiveAction decode_action(const nlohmann::json& entry);
ActionFlow decode_flow(const nlohmann::json& wire);

}  // namespace taskworld
