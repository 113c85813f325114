#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "platoonsim/energy.hpp"
#include "platoonsim/rng.hpp"
#include "platoonsim/simulate.hpp"

namespace platoonsim {

/// Velocity policies that satisfy the coordinate-wise descent condition
/// u_i * (A x)_i <= 0 by construction. They probe how much freedom that
/// condition leaves: trajectories under these policies are exactly the ones
/// the convergence theorems quantify over.
struct SynthesisPolicy {
    enum class Kind {
        GradientOpposed,  ///< u_i = -sgn((A x)_i) * rate: every coordinate descends
        RandomFeasible,   ///< per coordinate: 0 w.p. zero_probability, else a random descent speed
        AxisSwitching,    ///< only one coordinate moves at a time, rotating every switch_interval
        Stall,            ///< gradient-opposed until stall_time, then u = 0 forever
    };

    Kind kind = Kind::GradientOpposed;
    double rate = 0.05;             ///< speed scale (> 0)
    double zero_probability = 0.25; ///< RandomFeasible only
    double switch_interval = 0.5;   ///< AxisSwitching only (> 0)
    double stall_time = 0.0;        ///< Stall only (>= 0)
    std::uint64_t seed = 0;         ///< RandomFeasible draws
};

const char* to_string(SynthesisPolicy::Kind kind);

/// Integrates x_{k+1} = x_k + dt * u_k under the policy, recording states,
/// the chosen velocities as controls, and V(x) = 1/2 x^T A x. Asserts the
/// descent condition u_i * (A x)_i <= 0 exactly at every step (throws Error
/// if a policy bug ever violated it). Requires a symmetric A.
Trajectory synthesize(const Eigen::MatrixXd& a, const Eigen::VectorXd& x0,
                      const SynthesisPolicy& policy, double dt, double horizon);

/// Greedy fixed-center clustering of the trajectory tail: each tail sample
/// joins the first existing cluster whose center (the founding sample) is
/// within `radius`, else founds a new cluster. Clusters are returned in
/// decreasing membership order; every tail sample lies within its cluster's
/// reported radius of the center.
struct AccumulationEstimate {
    std::vector<Eigen::VectorXd> centers;
    std::vector<double> radii;   ///< max distance of a member from its center
    std::vector<int> counts;
    /// First/last tail sample index assigned to each cluster plus the number
    /// of switches between the top two clusters; used to distinguish
    /// recurrent visiting (genuine multiple accumulation points) from a
    /// transient passing through.
    std::vector<int> first_sample;
    std::vector<int> last_sample;
    int top_two_alternations = 0;

    std::size_t clusters() const { return centers.size(); }
};

/// tail_fraction in (0, 1]; requires a nonempty trajectory.
AccumulationEstimate estimate_accumulation(const Trajectory& trajectory, double tail_fraction,
                                           double radius);

/// Euclidean distance from point to the kernel of the energy's matrix
/// (orthogonal projection onto the stored orthonormal kernel basis). A
/// trivial kernel gives ||point||.
double kernel_distance(const QuadraticEnergy& energy, const Eigen::VectorXd& point);

enum class MatrixFamily {
    PositiveDefinite,
    PsdZeroFreeKernel,    ///< rank n-1, kernel vector with no zero entry
    PsdKernelWithZeros,   ///< rank n-1, kernel vector with at least one zero entry
};

const char* to_string(MatrixFamily family);
MatrixFamily matrix_family_from_string(const std::string& name);

enum class TrialOutcome {
    ConvergedInKernel,   ///< converged, limit within cluster_radius of ker A
    ConvergedOffKernel,  ///< converged, limit farther than that from ker A
    MultiCluster,        ///< not converged, tail splits into >= 2 clusters
    Diverging,           ///< ||x|| exceeded 1e3 * ||x0|| + 1e3
    Undecided,
};

const char* to_string(TrialOutcome outcome);

struct SearchOptions {
    int trials = 100;
    std::uint64_t seed = 0;
    int min_dim = 2;
    int max_dim = 8;
    double dt = 5e-3;
    double horizon = 240.0;
    double detect_window = 40.0;
    double detect_tol = 1e-3;
    double cluster_radius = 1e-2;  ///< 10x detect_tol by default
    double tail_fraction = 0.25;
    bool include_stall = true;     ///< stall trials freeze wherever they are (never converge to ker A)
};

struct TrialRecord {
    int index = 0;
    SynthesisPolicy policy;
    Eigen::MatrixXd a;
    Eigen::VectorXd x0;
    TrialOutcome outcome = TrialOutcome::Undecided;
    double limit_kernel_distance = 0.0;  ///< converged trials only
    int clusters = 1;
    double max_norm = 0.0;
};

/// What the random search over one matrix family observed. A theorem
/// contradiction is: any diverging or recurrent multi-cluster trial in the
/// positive-definite family, or a recurrent multi-cluster trial with an
/// off-kernel center in the zero-free-kernel family. Recurrent means the
/// tail alternates (>= 3 switches) between its two dominant clusters and
/// those clusters are genuinely separated (centers more than two cluster
/// radii apart); alternation between adjacent clusters is boundary chatter,
/// not evidence of two accumulation points. Multi-cluster tails in the
/// kernel-with-zeros family are the expected interesting finds, not
/// contradictions.
struct SearchReport {
    MatrixFamily family = MatrixFamily::PositiveDefinite;
    int trials = 0;
    std::map<TrialOutcome, int> tally;
    std::vector<TrialRecord> interesting;  ///< capped at 10 records
    bool theorem_contradiction = false;
    std::string contradiction_detail;
};

SearchReport search_counterexample(MatrixFamily family, const SearchOptions& options = {});

// Random instance generators used by the search (exposed for tests).
Eigen::MatrixXd random_positive_definite(int n, SplitMix64& rng);
/// Symmetric PSD of rank n-1 whose kernel is exactly span(kernel).
Eigen::MatrixXd random_psd_with_kernel(const Eigen::VectorXd& kernel, SplitMix64& rng);
Eigen::VectorXd random_zero_free_vector(int n, SplitMix64& rng);
Eigen::VectorXd random_vector_with_zero(int n, SplitMix64& rng);

}  // namespace platoonsim
