#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "platoonsim/controller.hpp"
#include "platoonsim/disturbance.hpp"
#include "platoonsim/graph.hpp"

namespace platoonsim {

struct IntegrationSpec {
    double dt = 1e-3;       ///< forward-Euler step (> 0)
    double horizon = 30.0;  ///< final time (> 0); steps = round(horizon / dt)
};

struct DetectionSpec {
    double window = 20.0;  ///< tail window length in seconds (> 0, <= horizon)
    double tol = 1e-3;     ///< per-coordinate tail variation tolerance (> 0)
};

/// Everything needed to reproduce one run: graph, formation offsets, initial
/// state, disturbances, control law, integration and detection parameters,
/// and a base seed for any randomized disturbance lacking an explicit one.
struct Scenario {
    SensingGraph graph;
    DesiredOffsets offsets;
    Eigen::VectorXd x0;
    EdgeDisturbanceMap disturbances;
    ControllerSpec controller;
    IntegrationSpec integration{};
    DetectionSpec detection{};
    std::uint64_t seed = 0;

    /// Throws ParseError (with the offending field) on any inconsistency:
    /// dimension mismatch, non-positive dt/horizon/gain, window > horizon,
    /// disturbances on non-edges, disconnected graph, negative widths.
    void validate() const;

    /// Reference positions p solving p_j - p_i = D_ji, anchored at p_0 = 0.
    Eigen::VectorXd reference_positions(double tol = 1e-9) const;

    /// Disturbances whose sup-norm exceeds controller.w_bar.
    std::vector<BoundWarning> bound_warnings() const;
};

}  // namespace platoonsim
