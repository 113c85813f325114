#include "platoonsim/explore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace platoonsim {

namespace {

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

void require_symmetric(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols() || a.rows() == 0) throw Error("synthesis needs a square matrix");
    const double scale = std::max(a.cwiseAbs().maxCoeff(), 1.0);
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
        throw Error("synthesis needs a symmetric matrix");
    }
}

Eigen::VectorXd policy_velocity(const SynthesisPolicy& policy, const Eigen::VectorXd& grad,
                                double t, SplitMix64& rng) {
    const int n = static_cast<int>(grad.size());
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    switch (policy.kind) {
        case SynthesisPolicy::Kind::GradientOpposed:
            for (int i = 0; i < n; ++i) u[i] = -sgn(grad[i]) * policy.rate;
            break;
        case SynthesisPolicy::Kind::RandomFeasible:
            for (int i = 0; i < n; ++i) {
                const double gate = rng.next_double();
                const double speed = rng.next_double();  // always drawn: stable stream
                if (gate >= policy.zero_probability) u[i] = -sgn(grad[i]) * policy.rate * speed;
            }
            break;
        case SynthesisPolicy::Kind::AxisSwitching: {
            const int active = static_cast<int>(std::floor(t / policy.switch_interval)) % n;
            u[active] = -sgn(grad[active]) * policy.rate;
            break;
        }
        case SynthesisPolicy::Kind::Stall:
            if (t < policy.stall_time) {
                for (int i = 0; i < n; ++i) u[i] = -sgn(grad[i]) * policy.rate;
            }
            break;
    }
    return u;
}

}  // namespace

const char* to_string(SynthesisPolicy::Kind kind) {
    switch (kind) {
        case SynthesisPolicy::Kind::GradientOpposed: return "gradient-opposed";
        case SynthesisPolicy::Kind::RandomFeasible: return "random-feasible";
        case SynthesisPolicy::Kind::AxisSwitching: return "axis-switching";
        case SynthesisPolicy::Kind::Stall: return "stall";
    }
    return "?";
}

const char* to_string(MatrixFamily family) {
    switch (family) {
        case MatrixFamily::PositiveDefinite: return "positive-definite";
        case MatrixFamily::PsdZeroFreeKernel: return "psd-zero-free-kernel";
        case MatrixFamily::PsdKernelWithZeros: return "psd-kernel-with-zeros";
    }
    return "?";
}

MatrixFamily matrix_family_from_string(const std::string& name) {
    if (name == "positive-definite") return MatrixFamily::PositiveDefinite;
    if (name == "psd-zero-free-kernel") return MatrixFamily::PsdZeroFreeKernel;
    if (name == "psd-kernel-with-zeros") return MatrixFamily::PsdKernelWithZeros;
    throw Error("unknown matrix family: " + name);
}

const char* to_string(TrialOutcome outcome) {
    switch (outcome) {
        case TrialOutcome::ConvergedInKernel: return "converged-in-kernel";
        case TrialOutcome::ConvergedOffKernel: return "converged-off-kernel";
        case TrialOutcome::MultiCluster: return "multi-cluster";
        case TrialOutcome::Diverging: return "diverging";
        case TrialOutcome::Undecided: return "undecided";
    }
    return "?";
}

Trajectory synthesize(const Eigen::MatrixXd& a, const Eigen::VectorXd& x0,
                      const SynthesisPolicy& policy, double dt, double horizon) {
    require_symmetric(a);
    if (x0.size() != a.rows()) throw Error("initial state dimension does not match the matrix");
    if (!(dt > 0.0) || !(horizon > 0.0)) throw Error("synthesis needs positive dt and horizon");
    if (!(policy.rate > 0.0)) throw Error("synthesis rate must be positive");
    if (policy.kind == SynthesisPolicy::Kind::AxisSwitching && !(policy.switch_interval > 0.0)) {
        throw Error("axis switching needs a positive switch interval");
    }

    const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
    SplitMix64 rng(policy.seed);

    Trajectory traj;
    traj.times.reserve(steps + 1);
    traj.states.reserve(steps + 1);
    traj.controls.reserve(steps + 1);
    traj.energy.reserve(steps + 1);

    Eigen::VectorXd x = x0;
    for (std::size_t k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        const Eigen::VectorXd grad = a * x;
        const Eigen::VectorXd u = policy_velocity(policy, grad, t, rng);
        for (int i = 0; i < u.size(); ++i) {
            // The policies guarantee this exactly (each u_i is 0 or opposes
            // grad_i); a positive product means a policy bug, not noise.
            if (u[i] * grad[i] > 0.0) {
                throw Error("synthesis policy violated the coordinate-wise descent condition");
            }
        }
        traj.times.push_back(t);
        traj.states.push_back(x);
        traj.controls.push_back(u);
        traj.energy.push_back(0.5 * x.dot(grad));
        if (k < steps) x += dt * u;
    }
    return traj;
}

AccumulationEstimate estimate_accumulation(const Trajectory& trajectory, double tail_fraction,
                                           double radius) {
    if (trajectory.samples() == 0) throw Error("accumulation estimate needs a nonempty trajectory");
    if (!(tail_fraction > 0.0) || tail_fraction > 1.0) {
        throw Error("tail fraction must lie in (0, 1]");
    }
    if (!(radius > 0.0)) throw Error("cluster radius must be positive");

    const std::size_t count = trajectory.samples();
    const auto tail = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(static_cast<double>(count) * tail_fraction)));
    const std::size_t k0 = count - tail;

    struct Cluster {
        Eigen::VectorXd center;  // the founding sample; never moves
        double radius = 0.0;
        int count = 0;
        int first = 0;
        int last = 0;
    };
    std::vector<Cluster> clusters;
    std::vector<int> assignment(tail, -1);

    for (std::size_t k = k0; k < count; ++k) {
        const Eigen::VectorXd& x = trajectory.states[k];
        int found = -1;
        for (std::size_t c = 0; c < clusters.size(); ++c) {
            const double d = (x - clusters[c].center).norm();
            if (d <= radius) {
                found = static_cast<int>(c);
                clusters[c].radius = std::max(clusters[c].radius, d);
                break;
            }
        }
        if (found < 0) {
            found = static_cast<int>(clusters.size());
            clusters.push_back({x, 0.0, 0, static_cast<int>(k), static_cast<int>(k)});
        }
        ++clusters[static_cast<std::size_t>(found)].count;
        clusters[static_cast<std::size_t>(found)].last = static_cast<int>(k);
        assignment[k - k0] = found;
    }

    std::vector<std::size_t> order(clusters.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return clusters[a].count > clusters[b].count;
    });

    AccumulationEstimate out;
    for (std::size_t c : order) {
        out.centers.push_back(clusters[c].center);
        out.radii.push_back(clusters[c].radius);
        out.counts.push_back(clusters[c].count);
        out.first_sample.push_back(clusters[c].first);
        out.last_sample.push_back(clusters[c].last);
    }

    // How often the trajectory hops between the two dominant clusters:
    // recurrent visiting of separated regions, as opposed to a one-way
    // transient, is the signature of multiple accumulation points.
    if (clusters.size() >= 2) {
        const int a = static_cast<int>(order[0]);
        const int b = static_cast<int>(order[1]);
        int previous = -1;
        for (int id : assignment) {
            if (id != a && id != b) continue;
            if (previous >= 0 && id != previous) ++out.top_two_alternations;
            previous = id;
        }
    }
    return out;
}

double kernel_distance(const QuadraticEnergy& energy, const Eigen::VectorXd& point) {
    if (point.size() != energy.dim()) throw Error("point dimension does not match the energy");
    const Eigen::MatrixXd& basis = energy.kernel_basis();
    if (basis.cols() == 0) return point.norm();
    return (point - basis * (basis.transpose() * point)).norm();
}

Eigen::MatrixXd random_positive_definite(int n, SplitMix64& rng) {
    if (n < 1) throw Error("matrix dimension must be positive");
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m(i, j) = rng.next_range(-1.0, 1.0);
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd eigenvalues(n);
    for (int i = 0; i < n; ++i) eigenvalues[i] = rng.next_range(0.3, 3.0);
    const Eigen::MatrixXd a = q * eigenvalues.asDiagonal() * q.transpose();
    return 0.5 * (a + a.transpose());
}

Eigen::MatrixXd random_psd_with_kernel(const Eigen::VectorXd& kernel, SplitMix64& rng) {
    const int n = static_cast<int>(kernel.size());
    if (n < 2) throw Error("a rank-deficient matrix needs dimension at least two");
    if (!(kernel.norm() > 0.0)) throw Error("kernel vector must be nonzero");
    // Orthonormal completion of the kernel direction: QR of [v | random]
    // yields Q whose first column spans v, so the remaining columns span its
    // orthogonal complement exactly.
    Eigen::MatrixXd m(n, n);
    m.col(0) = kernel.normalized();
    for (int j = 1; j < n; ++j) {
        for (int i = 0; i < n; ++i) m(i, j) = rng.next_range(-1.0, 1.0);
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd complement = q.rightCols(n - 1);
    Eigen::VectorXd eigenvalues(n - 1);
    for (int i = 0; i + 1 < n; ++i) eigenvalues[i] = rng.next_range(0.3, 3.0);
    const Eigen::MatrixXd a = complement * eigenvalues.asDiagonal() * complement.transpose();
    return 0.5 * (a + a.transpose());
}

Eigen::VectorXd random_zero_free_vector(int n, SplitMix64& rng) {
    if (n < 1) throw Error("vector dimension must be positive");
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) {
        const double sign = rng.next_double() < 0.5 ? -1.0 : 1.0;
        v[i] = sign * rng.next_range(0.2, 1.0);
    }
    return v;
}

Eigen::VectorXd random_vector_with_zero(int n, SplitMix64& rng) {
    if (n < 2) throw Error("a vector with a zero entry needs dimension at least two");
    Eigen::VectorXd v = random_zero_free_vector(n, rng);
    v[rng.next_int(n)] = 0.0;
    return v;
}

SearchReport search_counterexample(MatrixFamily family, const SearchOptions& options) {
    if (options.trials < 1) throw Error("the search needs at least one trial");
    if (options.min_dim < 2 || options.max_dim < options.min_dim) {
        throw Error("search dimensions must satisfy 2 <= min_dim <= max_dim");
    }

    std::vector<SynthesisPolicy::Kind> kinds{SynthesisPolicy::Kind::GradientOpposed,
                                             SynthesisPolicy::Kind::RandomFeasible,
                                             SynthesisPolicy::Kind::AxisSwitching};
    if (options.include_stall) kinds.push_back(SynthesisPolicy::Kind::Stall);

    SearchReport report;
    report.family = family;
    report.trials = options.trials;

    for (int trial = 0; trial < options.trials; ++trial) {
        SplitMix64 rng(mix_seed(options.seed, static_cast<std::uint64_t>(trial)));
        const int n = options.min_dim + rng.next_int(options.max_dim - options.min_dim + 1);

        Eigen::MatrixXd a;
        switch (family) {
            case MatrixFamily::PositiveDefinite:
                a = random_positive_definite(n, rng);
                break;
            case MatrixFamily::PsdZeroFreeKernel:
                a = random_psd_with_kernel(random_zero_free_vector(n, rng), rng);
                break;
            case MatrixFamily::PsdKernelWithZeros:
                a = random_psd_with_kernel(random_vector_with_zero(n, rng), rng);
                break;
        }

        Eigen::VectorXd x0(n);
        for (int i = 0; i < n; ++i) x0[i] = rng.next_range(-2.0, 2.0);

        SynthesisPolicy policy;
        policy.kind = kinds[static_cast<std::size_t>(trial) % kinds.size()];
        policy.rate = 0.05;
        policy.seed = mix_seed(options.seed, 0x706f6c69637900ull + static_cast<std::uint64_t>(trial));
        policy.stall_time = rng.next_range(0.1 * options.horizon, 0.5 * options.horizon);

        const Trajectory traj = synthesize(a, x0, policy, options.dt, options.horizon);
        const QuadraticEnergy energy(a);

        TrialRecord record;
        record.index = trial;
        record.policy = policy;
        record.a = a;
        record.x0 = x0;
        for (const Eigen::VectorXd& x : traj.states) {
            record.max_norm = std::max(record.max_norm, x.norm());
        }

        AccumulationEstimate est{};
        const double escape = 1e3 * x0.norm() + 1e3;
        if (record.max_norm > escape) {
            record.outcome = TrialOutcome::Diverging;
        } else {
            const ConvergenceVerdict verdict =
                detect(traj, options.detect_window, options.detect_tol);
            if (verdict.status == VerdictStatus::Converged) {
                record.limit_kernel_distance = kernel_distance(energy, verdict.x_star);
                record.outcome = record.limit_kernel_distance <= options.cluster_radius
                                     ? TrialOutcome::ConvergedInKernel
                                     : TrialOutcome::ConvergedOffKernel;
            } else {
                est = estimate_accumulation(traj, options.tail_fraction, options.cluster_radius);
                record.clusters = static_cast<int>(est.clusters());
                record.outcome = est.clusters() >= 2 ? TrialOutcome::MultiCluster
                                                     : TrialOutcome::Undecided;
            }
        }

        ++report.tally[record.outcome];

        // Escalate to a theorem contradiction only on solid evidence: a
        // diverging positive-definite trial, or recurrent hopping between
        // separated clusters (a one-way transient also splits into clusters
        // but converging runs do that routinely). Separation matters: a
        // trajectory chattering across a cluster boundary alternates between
        // two founding samples about one radius apart without revisiting
        // anything, so only clusters with disjoint balls (centers more than
        // two radii apart) count as distinct accumulation regions.
        const bool recurrent_multi =
            record.outcome == TrialOutcome::MultiCluster && est.top_two_alternations >= 3 &&
            est.clusters() >= 2 &&
            (est.centers[0] - est.centers[1]).norm() > 2.0 * options.cluster_radius;
        if (family == MatrixFamily::PositiveDefinite &&
            (record.outcome == TrialOutcome::Diverging || recurrent_multi)) {
            report.theorem_contradiction = true;
            std::ostringstream os;
            os << "trial " << trial << ": a positive-definite energy produced a "
               << to_string(record.outcome) << " descent trajectory";
            report.contradiction_detail = os.str();
        }
        if (family == MatrixFamily::PsdZeroFreeKernel && recurrent_multi) {
            for (std::size_t c = 0; c < est.clusters(); ++c) {
                const double d = kernel_distance(energy, est.centers[c]);
                if (d > options.cluster_radius) {
                    report.theorem_contradiction = true;
                    std::ostringstream os;
                    os << "trial " << trial << ": recurrent cluster center at distance " << d
                       << " from the kernel (radius " << options.cluster_radius << ")";
                    report.contradiction_detail = os.str();
                    break;
                }
            }
        }

        const bool interesting = record.outcome == TrialOutcome::Diverging ||
                                 record.outcome == TrialOutcome::MultiCluster ||
                                 record.outcome == TrialOutcome::ConvergedOffKernel;
        if (interesting && report.interesting.size() < 10) {
            report.interesting.push_back(std::move(record));
        }
    }
    return report;
}

}  // namespace platoonsim
