#pragma once

#include "hino/simkit/scenario.hpp"

#include <cstdint>
#include <string>

namespace hino {

/// YAML scenario document. Sections: name, trajectory, imu, landmarks,
/// observer, riccati, run; all optional, unknown keys rejected. Errors are
/// Error(kSchema) with "<source>:<line>:<col>: <key path>: <problem>".
Scenario parse_scenario(const std::string& text, const std::string& source = "<string>");
Scenario load_scenario(const std::string& path);

/// Canonical YAML form; parse_scenario(emit_scenario(sc)) reproduces sc.
std::string emit_scenario(const Scenario& sc);

/// 64-bit FNV-1a
std::uint64_t fnv1a(const std::string& bytes);
std::string config_hash(const Scenario& sc);

}  // namespace hino
