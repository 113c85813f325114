#include "platoonsim/simulate.hpp"

#include <cmath>

#include "platoonsim/energy.hpp"

namespace platoonsim {

const char* to_string(VerdictStatus status) {
    switch (status) {
        case VerdictStatus::Converged: return "converged";
        case VerdictStatus::Oscillating: return "oscillating";
        case VerdictStatus::Undecided: return "undecided";
    }
    return "?";
}

double Trajectory::dt() const {
    if (times.size() < 2) throw Error("trajectory has no sampling step");
    return times[1] - times[0];
}

Trajectory integrate(const Scenario& scenario) {
    scenario.validate();
    const Eigen::VectorXd p = scenario.reference_positions();
    const Eigen::MatrixXd l = scenario.graph.laplacian();
    const double dt = scenario.integration.dt;
    const auto steps = static_cast<std::size_t>(std::llround(scenario.integration.horizon / dt));
    if (steps < 1) throw ParseError("integration.horizon", "must cover at least one step");

    Trajectory traj;
    traj.times.reserve(steps + 1);
    traj.states.reserve(steps + 1);
    traj.controls.reserve(steps + 1);
    traj.energy.reserve(steps + 1);

    Eigen::VectorXd x = scenario.x0;
    for (std::size_t k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) * dt;  // not accumulated: no drift
        const Eigen::VectorXd u = control_all(x, t, scenario.graph, scenario.offsets,
                                              scenario.disturbances, scenario.controller);
        if (!u.allFinite()) throw DivergedError(k, t);
        traj.times.push_back(t);
        traj.states.push_back(x);
        traj.controls.push_back(u);
        traj.energy.push_back(disagreement(l, x - p));
        if (k < steps) {
            x += dt * u;
            if (!x.allFinite()) throw DivergedError(k + 1, static_cast<double>(k + 1) * dt);
        }
    }
    return traj;
}

ConvergenceVerdict detect(const Trajectory& trajectory, double window, double tol) {
    if (trajectory.samples() < 2) throw Error("verdict needs at least two samples");
    if (!(window > 0.0)) throw Error("detection window must be positive");
    if (!(tol > 0.0)) throw Error("detection tolerance must be positive");
    const double t_end = trajectory.times.back();
    const double duration = t_end - trajectory.times.front();
    if (window > duration + 1e-12) throw Error("detection window exceeds the trajectory length");

    const double t_tail = t_end - window;
    std::size_t k0 = 0;
    while (k0 < trajectory.samples() && trajectory.times[k0] < t_tail - 1e-12) ++k0;

    const int n = trajectory.dim();
    const std::size_t count = trajectory.samples();

    ConvergenceVerdict verdict;
    verdict.x_star = trajectory.states.back();

    Eigen::VectorXd lo = trajectory.states[k0];
    Eigen::VectorXd hi = trajectory.states[k0];
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(n);
    for (std::size_t k = k0; k < count; ++k) {
        lo = lo.cwiseMin(trajectory.states[k]);
        hi = hi.cwiseMax(trajectory.states[k]);
        mean += trajectory.states[k];
    }
    mean /= static_cast<double>(count - k0);
    const Eigen::VectorXd variation = hi - lo;
    verdict.tail_variation = variation.maxCoeff();

    if (verdict.tail_variation <= tol) {
        verdict.status = VerdictStatus::Converged;
        return verdict;
    }

    // A coordinate that keeps swinging across its own tail mean is
    // oscillating rather than creeping toward a limit.
    bool oscillating = false;
    double amplitude = 0.0;
    for (int i = 0; i < n; ++i) {
        if (variation[i] <= tol) continue;
        int crossings = 0;
        for (std::size_t k = k0; k + 1 < count; ++k) {
            const double a = trajectory.states[k][i] - mean[i];
            const double b = trajectory.states[k + 1][i] - mean[i];
            if (a * b < 0.0) ++crossings;
        }
        if (crossings >= 4) {
            oscillating = true;
            amplitude = std::max(amplitude, 0.5 * variation[i]);
        }
    }
    verdict.status = oscillating ? VerdictStatus::Oscillating : VerdictStatus::Undecided;
    verdict.oscillation_amplitude = amplitude;
    return verdict;
}

}  // namespace platoonsim
