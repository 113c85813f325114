#include "platoonsim/presets.hpp"

namespace platoonsim {

namespace {

// Disturbance map used by the two six-agent presets.  It differs from
// benchmark_platoon_disturbances() in one detail: the delayed pulse rides
// measurement (3,4) and the plain low-bias pulse rides (3,2), not the other
// way around.  The placement matters: with the delayed pulse on (3,4), the
// two directions of link 3-4 carry high-bias pulses in opposite phase, so no
// gap value silences both directions through a full period and the
// edge-deadzone run oscillates indefinitely.  With the delayed pulse on
// (3,2), every link admits a gap interval that is silent in both phases and
// the same run freezes in under a second.
EdgeDisturbanceMap demo_platoon_disturbances() {
    EdgeDisturbanceMap map = benchmark_platoon_disturbances();
    map.set(2, 1, DisturbanceSpec::pulse({0.1, -0.09, 2.0, 1.0, 0.0}));
    map.set(2, 3, DisturbanceSpec::pulse({0.1, 0.01, 2.0, 1.0, 1.0}));
    return map;
}

// The shared six-agent benchmark: unit-spacing chain, mixed pulse
// disturbances (four of which peak at 0.11, above the assumed bound 0.1),
// ramp deadzone with w = 0.1 and a 0.02 transition band, gain 3.
Scenario benchmark_platoon(ControllerKind kind, double horizon) {
    SensingGraph graph = SensingGraph::chain(6);
    DesiredOffsets offsets = DesiredOffsets::uniform_chain(graph, 1.0);
    Eigen::VectorXd x0(6);
    x0 << 0.0, 0.5, 1.4, 2.2, 3.1, 4.1;

    ControllerSpec controller;
    controller.kind = kind;
    controller.gain = 3.0;
    controller.threshold = {ThresholdKind::Ramp, 0.1, 0.02};
    controller.w_bar = 0.1;

    Scenario scenario{std::move(graph),
                      std::move(offsets),
                      std::move(x0),
                      demo_platoon_disturbances(),
                      controller,
                      {1e-3, horizon},
                      {20.0, 1e-3},
                      0};
    return scenario;
}

}  // namespace

Scenario preset_oscillating_platoon() {
    return benchmark_platoon(ControllerKind::EdgeDeadzone, 60.0);
}

Scenario preset_converging_platoon() {
    return benchmark_platoon(ControllerKind::NodeDeadzone, 30.0);
}

Scenario preset_two_agent_drift() {
    SensingGraph graph = SensingGraph::chain(2);
    DesiredOffsets offsets = DesiredOffsets::uniform_chain(graph, 1.0);
    Eigen::VectorXd x0(2);
    x0 << 0.0, 1.0;  // already in formation; only the bias moves the pair

    EdgeDisturbanceMap disturbances;
    disturbances.set(1, 0, DisturbanceSpec::constant(0.01));  // agent 1 observing agent 2
    disturbances.set(0, 1, DisturbanceSpec::zero());

    ControllerSpec controller;
    controller.kind = ControllerKind::Proportional;
    controller.gain = 1.0;
    controller.threshold = {ThresholdKind::Hard, 0.0, 0.0};
    controller.w_bar = 0.01;

    Scenario scenario{std::move(graph),
                      std::move(offsets),
                      std::move(x0),
                      std::move(disturbances),
                      controller,
                      {1e-3, 10.0},
                      {5.0, 1e-3},
                      0};
    return scenario;
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"oscillating-platoon", "converging-platoon",
                                                "two-agent-drift"};
    return names;
}

Scenario make_preset(const std::string& name) {
    if (name == "oscillating-platoon") return preset_oscillating_platoon();
    if (name == "converging-platoon") return preset_converging_platoon();
    if (name == "two-agent-drift") return preset_two_agent_drift();
    throw Error("unknown preset: " + name + " (available: oscillating-platoon, "
                "converging-platoon, two-agent-drift)");
}

}  // namespace platoonsim
