#pragma once

#include <string>
#include <vector>

#include "platoonsim/scenario.hpp"

namespace platoonsim {

/// Six-agent chain platoon, unit spacing, gain 3, ramp deadzone (w = 0.1,
/// delta_w = 0.02), mixed pulse disturbances, EDGE deadzone law. Four of its
/// disturbances peak at 0.11 > w_bar = 0.1, and the two directions of link
/// 3-4 carry high-bias pulses in opposite phase, so no gap value silences
/// that link through a full period: the platoon oscillates indefinitely.
Scenario preset_oscillating_platoon();

/// Same platoon under the NODE deadzone law: the aggregated deadzone of
/// width degree * w_bar absorbs the same disturbances and the platoon
/// converges near the desired formation.
Scenario preset_converging_platoon();

/// Two agents, proportional control (gain 1), a constant measurement bias of
/// 0.01 on one direction only: the pair keeps formation but the coordinate
/// sum x_1 + x_2 drifts at exactly gain * 0.01 per second — 0.1 over the
/// 10-second horizon. The smallest demonstration of why deadzones are needed.
Scenario preset_two_agent_drift();

const std::vector<std::string>& preset_names();
/// Throws Error for an unknown name.
Scenario make_preset(const std::string& name);

}  // namespace platoonsim
