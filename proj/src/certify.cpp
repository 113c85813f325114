#include "platoonsim/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "platoonsim/energy.hpp"

namespace platoonsim {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Turns a running extremum into a presentable entry: a check that never had
// anything to compare (single-sample trajectory) passes with margin 0.
void finalize(CheckEntry& entry) {
    if (entry.worst_margin == kNegInf) {
        entry.worst_margin = 0.0;
        entry.worst_time = 0.0;
        entry.worst_index = -1;
    }
    entry.pass = entry.worst_margin <= entry.tolerance;
}

// Velocity samples for the sign-condition check: recorded controls when
// available, forward differences otherwise. Returns one velocity per usable
// sample (all samples with controls; all but the last without).
struct VelocityView {
    const Trajectory* traj;
    bool finite_difference;
    std::size_t count() const {
        return finite_difference ? traj->samples() - 1 : traj->samples();
    }
    Eigen::VectorXd at(std::size_t k) const {
        if (!finite_difference) return traj->controls[k];
        return (traj->states[k + 1] - traj->states[k]) / traj->dt();
    }
};

}  // namespace

bool CertificationReport::all_pass() const {
    return std::all_of(entries.begin(), entries.end(),
                       [](const CheckEntry& e) { return e.pass; });
}

const CheckEntry* CertificationReport::find(std::string_view name) const {
    for (const CheckEntry& e : entries) {
        if (e.name == name) return &e;
    }
    return nullptr;
}

std::vector<Eigen::VectorXd> to_disagreement(const std::vector<Eigen::VectorXd>& states,
                                             const Eigen::VectorXd& p) {
    std::vector<Eigen::VectorXd> out;
    out.reserve(states.size());
    for (const Eigen::VectorXd& x : states) {
        if (x.size() != p.size()) throw Error("state and reference dimensions differ");
        out.push_back(x - p);
    }
    return out;
}

Trajectory to_disagreement(const Trajectory& trajectory, const Eigen::VectorXd& p) {
    Trajectory out = trajectory;
    out.states = to_disagreement(trajectory.states, p);
    return out;
}

CheckEntry check_sign_condition(const Trajectory& y_trajectory, const Eigen::MatrixXd& a,
                                double tol) {
    if (y_trajectory.samples() == 0) throw Error("sign condition needs a nonempty trajectory");
    CheckEntry entry;
    entry.name = "sign-condition";
    entry.tolerance = tol;
    entry.worst_margin = kNegInf;

    const bool fd = !y_trajectory.has_controls();
    entry.note = fd ? "velocities from forward differences" : "velocities from recorded controls";
    if (fd && y_trajectory.samples() < 2) throw Error("finite differences need two samples");

    const VelocityView velocities{&y_trajectory, fd};
    for (std::size_t k = 0; k < velocities.count(); ++k) {
        const Eigen::VectorXd grad = a * y_trajectory.states[k];
        const Eigen::VectorXd v = velocities.at(k);
        for (int i = 0; i < grad.size(); ++i) {
            const double product = v[i] * grad[i];
            if (product > entry.worst_margin) {
                entry.worst_margin = product;
                entry.worst_time = y_trajectory.times[k];
                entry.worst_index = i;
            }
        }
    }
    finalize(entry);
    return entry;
}

CheckEntry check_energy_monotone(const Trajectory& y_trajectory, const Eigen::MatrixXd& a,
                                 double tol) {
    if (y_trajectory.samples() == 0) throw Error("energy check needs a nonempty trajectory");
    CheckEntry entry;
    entry.name = "energy-monotone";
    entry.tolerance = tol;
    entry.worst_margin = kNegInf;

    double previous = 0.5 * y_trajectory.states[0].dot(a * y_trajectory.states[0]);
    for (std::size_t k = 1; k < y_trajectory.samples(); ++k) {
        const double current = 0.5 * y_trajectory.states[k].dot(a * y_trajectory.states[k]);
        const double increase = current - previous;
        if (increase > entry.worst_margin) {
            entry.worst_margin = increase;
            entry.worst_time = y_trajectory.times[k];
            entry.worst_index = -1;
        }
        previous = current;
    }
    finalize(entry);
    return entry;
}

CheckEntry check_minmax_monotone(const Trajectory& y_trajectory, double tol) {
    if (y_trajectory.samples() == 0) throw Error("min/max check needs a nonempty trajectory");
    CheckEntry entry;
    entry.name = "minmax-monotone";
    entry.tolerance = tol;
    entry.worst_margin = kNegInf;

    double prev_min = y_trajectory.states[0].minCoeff();
    double prev_max = y_trajectory.states[0].maxCoeff();
    for (std::size_t k = 1; k < y_trajectory.samples(); ++k) {
        int arg_min = 0, arg_max = 0;
        const double cur_min = y_trajectory.states[k].minCoeff(&arg_min);
        const double cur_max = y_trajectory.states[k].maxCoeff(&arg_max);
        const double max_growth = cur_max - prev_max;   // > 0 violates
        const double min_drop = prev_min - cur_min;     // > 0 violates
        if (max_growth > entry.worst_margin) {
            entry.worst_margin = max_growth;
            entry.worst_time = y_trajectory.times[k];
            entry.worst_index = arg_max;
        }
        if (min_drop > entry.worst_margin) {
            entry.worst_margin = min_drop;
            entry.worst_time = y_trajectory.times[k];
            entry.worst_index = arg_min;
        }
        prev_min = cur_min;
        prev_max = cur_max;
    }
    finalize(entry);
    return entry;
}

CheckEntry check_hull_containment(const Trajectory& trajectory, const Eigen::VectorXd& p,
                                  double tol) {
    if (trajectory.samples() == 0) throw Error("hull check needs a nonempty trajectory");
    if (trajectory.states[0].size() != p.size()) {
        throw Error("state and reference dimensions differ");
    }
    CheckEntry entry;
    entry.name = "hull-containment";
    entry.tolerance = tol;
    entry.worst_margin = kNegInf;

    const Eigen::VectorXd h0 = trajectory.states[0] - p;
    const double lo = h0.minCoeff();
    const double hi = h0.maxCoeff();
    for (std::size_t k = 0; k < trajectory.samples(); ++k) {
        const Eigen::VectorXd h = trajectory.states[k] - p;
        for (int i = 0; i < h.size(); ++i) {
            const double outside = std::max(lo - h[i], h[i] - hi);
            if (outside > entry.worst_margin) {
                entry.worst_margin = outside;
                entry.worst_time = trajectory.times[k];
                entry.worst_index = i;
            }
        }
    }
    finalize(entry);
    return entry;
}

CheckEntry check_residual_bounds(const Eigen::VectorXd& x_star, const SensingGraph& g,
                                 const DesiredOffsets& offsets, double w_bar, double slack) {
    if (x_star.size() == 0) throw Error("residual bounds need a converged limit state");
    if (x_star.size() != g.size()) throw Error("limit state dimension does not match the graph");
    CheckEntry entry;
    entry.name = "residual-bounds";
    entry.tolerance = slack;
    entry.worst_margin = kNegInf;

    for (int i = 0; i < g.size(); ++i) {
        double residual = 0.0;
        for (int j : g.neighbors(i)) {
            residual += x_star[j] - x_star[i] - offsets.get(j, i);
        }
        const double excess = std::abs(residual) - 2.0 * g.degree(i) * w_bar;
        if (excess > entry.worst_margin) {
            entry.worst_margin = excess;
            entry.worst_index = i;
        }
    }
    finalize(entry);
    return entry;
}

std::vector<double> chain_error_bounds(int n, double w_bar) {
    if (n < 2) throw Error("chain bounds need at least two agents");
    if (w_bar < 0.0) throw Error("disturbance bound must be nonnegative");
    // Two one-sided inductions meet in the middle: walking from the front of
    // the chain the l-th link obeys (4l - 6) w_bar, walking from the back it
    // obeys (4(n - l) + 2) w_bar; each link gets the smaller of the two.
    std::vector<double> bounds;
    bounds.reserve(static_cast<std::size_t>(n - 1));
    for (int l = 2; l <= n; ++l) {
        const double from_front = 4.0 * l - 6.0;
        const double from_back = 4.0 * (n - l) + 2.0;
        bounds.push_back(std::min(from_front, from_back) * w_bar);
    }
    return bounds;
}

CheckEntry check_chain_errors(const Eigen::VectorXd& x_star, const SensingGraph& g,
                              const DesiredOffsets& offsets, double w_bar, double slack) {
    if (x_star.size() == 0) throw Error("chain bounds need a converged limit state");
    if (!g.is_chain()) throw Error("chain bounds require a chain graph");
    if (x_star.size() != g.size()) throw Error("limit state dimension does not match the graph");
    CheckEntry entry;
    entry.name = "chain-bounds";
    entry.tolerance = slack;
    entry.worst_margin = kNegInf;

    const std::vector<double> bounds = chain_error_bounds(g.size(), w_bar);
    for (int l = 2; l <= g.size(); ++l) {
        const double error = std::abs(x_star[l - 1] - x_star[l - 2] - offsets.get(l - 1, l - 2));
        const double excess = error - bounds[static_cast<std::size_t>(l - 2)];
        if (excess > entry.worst_margin) {
            entry.worst_margin = excess;
            entry.worst_index = l - 1;  // downstream agent of the worst link
        }
    }
    finalize(entry);
    return entry;
}

double energy_monotone_tolerance(const Scenario& scenario, const Eigen::MatrixXd& laplacian,
                                 double v0, const CertifyOptions& options) {
    // One Euler step changes the energy by dt * u.L y + dt^2/2 * u.L u; the
    // first term is what the continuous-time argument controls, the second is
    // discretization noise bounded by dt^2/2 * ||L|| * ||u||^2 with
    // ||u||^2 <= n * (gain * aggregated error)^2. Aggregated errors stay
    // O(sqrt(V)) on a dissipating run, giving the scale below; the factor
    // options.energy_tol_scale covers the constants. The Frobenius norm keeps
    // the envelope generous enough for edge-deadzone runs, whose per-step
    // energy bumps exceed the spectral-norm budget while still being pure
    // discretization noise.
    const double l_norm = laplacian.norm();
    const double gain = scenario.controller.gain;
    const double dt = scenario.integration.dt;
    const double n = static_cast<double>(scenario.graph.size());
    const double tol = options.energy_tol_scale * gain * gain * n * dt * dt * l_norm * v0;
    return std::max(tol, options.energy_tol_floor);
}

CertificationReport certify_trajectory(const Trajectory& trajectory, const Scenario& scenario,
                                       const Eigen::VectorXd& p,
                                       const ConvergenceVerdict& verdict,
                                       const CertifyOptions& options) {
    const Eigen::MatrixXd l = scenario.graph.laplacian();
    const Trajectory y = to_disagreement(trajectory, p);

    CertificationReport report;
    report.entries.push_back(check_sign_condition(y, l, options.sign_tol));

    const double v0 = 0.5 * y.states[0].dot(l * y.states[0]);
    const double energy_tol = energy_monotone_tolerance(scenario, l, v0, options);
    report.entries.push_back(check_energy_monotone(y, l, energy_tol));
    report.entries.push_back(check_minmax_monotone(y, options.minmax_tol));
    report.entries.push_back(check_hull_containment(trajectory, p, options.hull_tol));

    if (verdict.status == VerdictStatus::Converged) {
        const double slack = scenario.detection.tol;
        report.entries.push_back(check_residual_bounds(verdict.x_star, scenario.graph,
                                                       scenario.offsets, scenario.controller.w_bar,
                                                       slack));
        if (scenario.graph.is_chain()) {
            report.entries.push_back(check_chain_errors(verdict.x_star, scenario.graph,
                                                        scenario.offsets,
                                                        scenario.controller.w_bar, slack));
        }
    }
    return report;
}

SimulationResult run(const Scenario& scenario) {
    SimulationResult result{integrate(scenario), {}, {}, scenario.reference_positions()};
    result.verdict = detect(result.trajectory, scenario.detection.window, scenario.detection.tol);
    result.report = certify_trajectory(result.trajectory, scenario, result.reference,
                                       result.verdict);
    return result;
}

}  // namespace platoonsim
