#include "platoonsim/scenario.hpp"

namespace platoonsim {

void Scenario::validate() const {
    if (x0.size() != graph.size()) {
        throw ParseError("x0", "initial state has the wrong dimension");
    }
    if (!graph.is_connected()) {
        throw ParseError("graph", "the sensing graph must be connected");
    }
    try {
        disturbances.validate_edges(graph);
    } catch (const Error& e) {
        throw ParseError("disturbances", e.what());
    }
    if (!(controller.gain > 0.0)) throw ParseError("controller.gain", "must be positive");
    if (controller.w_bar < 0.0) throw ParseError("controller.w_bar", "must be nonnegative");
    if (controller.threshold.width < 0.0) {
        throw ParseError("controller.threshold.w", "must be nonnegative");
    }
    if (controller.kind != ControllerKind::Proportional &&
        controller.threshold.kind != ThresholdKind::Hard &&
        !(controller.threshold.ramp_width > 0.0)) {
        throw ParseError("controller.threshold.delta_w", "must be positive for ramp thresholds");
    }
    if (!(integration.dt > 0.0)) throw ParseError("integration.dt", "must be positive");
    if (!(integration.horizon > 0.0)) throw ParseError("integration.horizon", "must be positive");
    if (!(detection.window > 0.0)) throw ParseError("detection.window", "must be positive");
    if (detection.window > integration.horizon + 1e-12) {
        throw ParseError("detection.window", "must not exceed the integration horizon");
    }
    if (!(detection.tol > 0.0)) throw ParseError("detection.tol", "must be positive");
}

Eigen::VectorXd Scenario::reference_positions(double tol) const {
    return solve_reference_positions(graph, offsets, tol);
}

std::vector<BoundWarning> Scenario::bound_warnings() const {
    return disturbance_bound_warnings(disturbances, controller.w_bar);
}

}  // namespace platoonsim
