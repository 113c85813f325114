#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "platoonsim/scenario.hpp"

namespace platoonsim {

/// Sampled trajectory: states (and optionally the controls that produced
/// them) at uniformly spaced times, plus the energy value at each sample.
/// For platoon runs the energy is the disagreement of y = x - p; for
/// synthesized trajectories it is the quadratic form that drove the
/// synthesis.
struct Trajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;
    std::vector<Eigen::VectorXd> controls;  ///< empty when not recorded
    std::vector<double> energy;

    std::size_t samples() const { return times.size(); }
    int dim() const { return states.empty() ? 0 : static_cast<int>(states.front().size()); }
    bool has_controls() const { return !controls.empty(); }
    /// Sampling step; requires >= 2 samples.
    double dt() const;
};

enum class VerdictStatus { Converged, Oscillating, Undecided };

const char* to_string(VerdictStatus status);

struct ConvergenceVerdict {
    VerdictStatus status = VerdictStatus::Undecided;
    /// Final state; the estimated limit when status == Converged.
    Eigen::VectorXd x_star;
    /// max over coordinates of (max - min) within the tail window.
    double tail_variation = 0.0;
    /// Half the largest tail swing among coordinates classified as
    /// oscillating; 0 otherwise.
    double oscillation_amplitude = 0.0;
};

/// Forward-Euler integration of the closed loop: x_{k+1} = x_k + dt * u(x_k,
/// t_k), t_k = k * dt, disturbances sampled at the left endpoint. Records
/// states, controls and the disagreement energy of x - p at every step
/// (horizon/dt + 1 samples). Throws DivergedError at the first non-finite
/// state or control.
Trajectory integrate(const Scenario& scenario);

/// Classifies the tail of a trajectory:
///  - converged: every coordinate varies by at most tol over the last
///    `window` seconds;
///  - oscillating: some coordinate varies by more than tol and crosses its
///    tail mean at least 4 times;
///  - undecided: otherwise.
/// Throws Error if the trajectory has fewer than 2 samples or is shorter
/// than the window.
ConvergenceVerdict detect(const Trajectory& trajectory, double window, double tol);

}  // namespace platoonsim
