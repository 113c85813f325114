#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "platoonsim/simulate.hpp"

namespace platoonsim {

/// Outcome of one certification check. `worst_margin` is the largest observed
/// violation of the certified inequality (so pass == (worst_margin <=
/// tolerance)); negative margins mean the property held with room to spare.
struct CheckEntry {
    std::string name;
    bool pass = false;
    double worst_margin = 0.0;
    double tolerance = 0.0;
    double worst_time = 0.0;  ///< sample time of the worst margin (0 for static checks)
    int worst_index = -1;     ///< 0-based agent / coordinate / chain position; -1 if n/a
    std::string note;         ///< human-readable context (e.g. finite-difference mode)
};

struct CertificationReport {
    std::vector<CheckEntry> entries;

    bool all_pass() const;
    const CheckEntry* find(std::string_view name) const;
};

/// Shifts every state by -p: the disagreement coordinates y = x - p in which
/// the closed loop is a pure consensus system.
std::vector<Eigen::VectorXd> to_disagreement(const std::vector<Eigen::VectorXd>& states,
                                             const Eigen::VectorXd& p);
Trajectory to_disagreement(const Trajectory& trajectory, const Eigen::VectorXd& p);

/// "sign-condition": ydot_i * (A y)_i <= tol coordinate-wise at every sample,
/// using recorded controls as ydot, or forward differences when absent (the
/// entry's note says which).
CheckEntry check_sign_condition(const Trajectory& y_trajectory, const Eigen::MatrixXd& a,
                                double tol);

/// "energy-monotone": V(y_{k+1}) - V(y_k) <= tol for V = 1/2 y^T A y.
CheckEntry check_energy_monotone(const Trajectory& y_trajectory, const Eigen::MatrixXd& a,
                                 double tol);

/// "minmax-monotone": max_i y_i never increases and min_i y_i never decreases
/// by more than tol between consecutive samples.
CheckEntry check_minmax_monotone(const Trajectory& y_trajectory, double tol);

/// "hull-containment": with h = x - p, every h_i(t) stays inside
/// [min_j h_j(0) - tol, max_j h_j(0) + tol].
CheckEntry check_hull_containment(const Trajectory& trajectory, const Eigen::VectorXd& p,
                                  double tol);

/// "residual-bounds": at the converged limit, the aggregated offset error of
/// every agent obeys |sum_j (x*_j - x*_i - D_ji)| <= 2 * degree(i) * w_bar +
/// slack. Throws Error when x_star is empty (no converged limit).
CheckEntry check_residual_bounds(const Eigen::VectorXd& x_star, const SensingGraph& g,
                                 const DesiredOffsets& offsets, double w_bar, double slack);

/// Per-link limit error bounds for a chain of n agents under the node
/// deadzone law: bound(l) = min(4l - 6, 4(n - l) + 2) * w_bar for the link
/// between agents l-1 and l (l = 2..n, 1-based). Two one-sided inductions
/// from either end of the chain; each link gets the smaller. Requires n >= 2,
/// w_bar >= 0.
std::vector<double> chain_error_bounds(int n, double w_bar);

/// "chain-bounds": |x*_l - x*_{l-1} - D_{l,l-1}| <= chain_error_bounds(...)
/// + slack on every link. Requires a chain graph and a converged limit.
CheckEntry check_chain_errors(const Eigen::VectorXd& x_star, const SensingGraph& g,
                              const DesiredOffsets& offsets, double w_bar, double slack);

struct CertifyOptions {
    double sign_tol = 1e-12;
    double minmax_tol = 1e-6;
    double hull_tol = 1e-6;
    /// energy-monotone tolerance = energy_tol_scale * gain^2 * n * dt^2 *
    /// ||L||_F * V(y_0), floored at energy_tol_floor: the worst single-step
    /// energy increase forward Euler can cause while the continuous-time
    /// dissipation argument holds.
    double energy_tol_scale = 10.0;
    double energy_tol_floor = 1e-12;
};

/// The discretization-aware energy-monotone tolerance described above.
double energy_monotone_tolerance(const Scenario& scenario, const Eigen::MatrixXd& laplacian,
                                 double v0, const CertifyOptions& options = {});

/// Runs the full suite against a platoon trajectory: sign-condition,
/// energy-monotone, minmax-monotone (on y = x - p with A = L), hull
/// containment (on x), and — when the verdict is converged — residual bounds
/// plus, on chain graphs, the per-link chain bounds, both with slack =
/// scenario.detection.tol.
CertificationReport certify_trajectory(const Trajectory& trajectory, const Scenario& scenario,
                                       const Eigen::VectorXd& p,
                                       const ConvergenceVerdict& verdict,
                                       const CertifyOptions& options = {});

/// Integration, verdict and certification of one scenario, end to end.
struct SimulationResult {
    Trajectory trajectory;
    ConvergenceVerdict verdict;
    CertificationReport report;
    Eigen::VectorXd reference;  ///< p used for the change of variables
};

SimulationResult run(const Scenario& scenario);

}  // namespace platoonsim
