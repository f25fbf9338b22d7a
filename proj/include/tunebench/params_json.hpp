#pragma once

#include <json.hpp>

#include "tunebench/calculi.hpp"

namespace tunebench {

/// {"calculus": "<name>", "values": {<field>: <number>, ...}}
nlohmann::json params_to_json(const CalculusParams& params);

/// Inverse of params_to_json. Every field must be present and finite, and
/// bounded fields must lie in their admissible range; throws FormatError.
CalculusParams params_from_json(const nlohmann::json& doc);

}  // namespace tunebench
