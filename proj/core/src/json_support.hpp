#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "qachaos/model.hpp"

namespace qachaos::detail {

nlohmann::json spec_to_json_value(const HamiltonianSpec& spec);

// `path` prefixes field names in ConfigError messages.
HamiltonianSpec spec_from_json_value(const nlohmann::json& value, const std::string& path);

}  // namespace qachaos::detail
