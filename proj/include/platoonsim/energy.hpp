#pragma once

#include <Eigen/Dense>

#include "platoonsim/errors.hpp"

namespace platoonsim {

enum class Definiteness {
    PositiveDefinite,   ///< all eigenvalues > tol * max eigenvalue
    PsdRankDeficient,   ///< nonnegative spectrum with a nontrivial kernel
    Indefinite,         ///< at least one eigenvalue < -tol * max eigenvalue
};

const char* to_string(Definiteness kind);

struct Classification {
    Definiteness kind = Definiteness::PositiveDefinite;
    /// Orthonormal kernel basis, n x k (k == 0 unless rank-deficient).
    Eigen::MatrixXd kernel_basis;
};

/// Classifies a symmetric matrix by its spectrum. Eigenvalues within
/// tol * max(|eigenvalue|, 1) of zero count as zero. Throws Error if a is not
/// square or not symmetric (elementwise tolerance 1e-9 on the asymmetry).
Classification classify(const Eigen::MatrixXd& a, double tol = 1e-9);

/// Quadratic energy V(x) = 1/2 x^T A x for a symmetric matrix A, with its
/// spectral classification computed once up front.
class QuadraticEnergy {
public:
    explicit QuadraticEnergy(Eigen::MatrixXd a, double tol = 1e-9);

    int dim() const { return static_cast<int>(a_.rows()); }
    const Eigen::MatrixXd& matrix() const { return a_; }

    double value(const Eigen::VectorXd& x) const;
    /// grad V(x) = A x.
    Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;

    Definiteness classification() const { return cls_.kind; }
    const Eigen::MatrixXd& kernel_basis() const { return cls_.kernel_basis; }

    /// True iff the kernel is one-dimensional and its basis vector has no
    /// zero entry (relative threshold 1e-9 on |entry| / norm).
    bool kernel_is_zero_free() const;

private:
    Eigen::MatrixXd a_;
    Classification cls_;
};

/// Disagreement 1/2 x^T L x for a graph Laplacian; equals
/// 1/2 * sum over edges of weight * (x_i - x_j)^2.
double disagreement(const Eigen::MatrixXd& laplacian, const Eigen::VectorXd& x);

}  // namespace platoonsim
