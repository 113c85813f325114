#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "platoonsim/scenario.hpp"

namespace platoonsim {

/// JSON scenario schema (agent indices 1-based on disk):
///
/// {
///   "graph":        {"type": "chain", "n": 6}
///                   | {"type": "edges", "n": 4, "edges": [[1,2], [2,3,1.5]]},
///   "offsets":      [[2, 1, 1.0], ...],              // [j, i, D_ji]
///   "x0":           [0.0, 0.5, ...],
///   "disturbances": [{"edge": [1, 2], "kind": "pulse", "magnitude": 0.1,
///                     "bias": -0.09, "period": 2.0, "pulse_width": 1.0,
///                     "phase_delay": 0.0},
///                    {"edge": [2, 1], "kind": "zero"},
///                    {"edge": [3, 2], "kind": "constant", "value": 0.01},
///                    {"edge": [2, 3], "kind": "uniform_random",
///                     "amplitude": 0.05, "hold_time": 0.5, "seed": 7}],
///   "controller":   {"kind": "node-deadzone" | "edge-deadzone" | "proportional",
///                    "gain": 3.0,
///                    "threshold": {"kind": "hard" | "ramp" | "ramp-continuous",
///                                  "w": 0.1, "delta_w": 0.02},
///                    "w_bar": 0.1},
///   "integration":  {"dt": 0.001, "horizon": 30.0},
///   "detection":    {"window": 20.0, "tol": 0.001},
///   "seed":         0
/// }
///
/// A uniform_random disturbance may omit "seed"; it then receives a seed
/// derived from the scenario seed and the edge, fixed at parse time, so a
/// reserialized scenario is always explicit and hashes identically.
nlohmann::json scenario_to_json(const Scenario& scenario);

/// Parses and validates; throws ParseError naming the offending field.
Scenario scenario_from_json(const nlohmann::json& j);

Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

/// Canonical serialization (sorted keys, fixed number formatting) used for
/// hashing and round-trip comparison.
std::string canonical_scenario_string(const Scenario& scenario);

/// FNV-1a 64-bit hash of the canonical serialization; stamped into run
/// summaries so outputs can be traced to the exact scenario.
std::uint64_t scenario_hash(const Scenario& scenario);

}  // namespace platoonsim
