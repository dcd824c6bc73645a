#pragma once

#include <string>

#include <json.hpp>

#include "mubforge/states.hpp"

namespace mubforge::io {

/// {"d": int, "groups": [[[re, im] x d]...], "provenance": string}
nlohmann::ordered_json state_set_to_json(const StateSet& set);
StateSet state_set_from_json(const nlohmann::json& j);

void write_state_set(const StateSet& set, const std::string& path);
StateSet read_state_set(const std::string& path);

}  // namespace mubforge::io
