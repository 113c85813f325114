#include "platoonsim/energy.hpp"

#include <algorithm>
#include <cmath>

namespace platoonsim {

const char* to_string(Definiteness kind) {
    switch (kind) {
        case Definiteness::PositiveDefinite: return "positive-definite";
        case Definiteness::PsdRankDeficient: return "psd-rank-deficient";
        case Definiteness::Indefinite: return "indefinite";
    }
    return "?";
}

Classification classify(const Eigen::MatrixXd& a, double tol) {
    if (a.rows() != a.cols()) throw Error("classification requires a square matrix");
    if (a.rows() == 0) throw Error("classification requires a nonempty matrix");
    const double scale = std::max(a.cwiseAbs().maxCoeff(), 1.0);
    if (((a - a.transpose()).cwiseAbs().maxCoeff()) > 1e-9 * scale) {
        throw Error("classification requires a symmetric matrix");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (a + a.transpose()));
    if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
    const Eigen::VectorXd& ev = es.eigenvalues();  // ascending
    const double cutoff = tol * std::max(std::abs(ev[ev.size() - 1]), 1.0);

    Classification out;
    if (ev[0] < -cutoff) {
        out.kind = Definiteness::Indefinite;
        out.kernel_basis = Eigen::MatrixXd(a.rows(), 0);
        return out;
    }
    int kernel_dim = 0;
    while (kernel_dim < ev.size() && std::abs(ev[kernel_dim]) <= cutoff) ++kernel_dim;
    out.kind = (kernel_dim == 0) ? Definiteness::PositiveDefinite : Definiteness::PsdRankDeficient;
    out.kernel_basis = es.eigenvectors().leftCols(kernel_dim);
    return out;
}

QuadraticEnergy::QuadraticEnergy(Eigen::MatrixXd a, double tol)
    : a_(std::move(a)), cls_(classify(a_, tol)) {}

double QuadraticEnergy::value(const Eigen::VectorXd& x) const {
    if (x.size() != a_.rows()) throw Error("energy argument has the wrong dimension");
    return 0.5 * x.dot(a_ * x);
}

Eigen::VectorXd QuadraticEnergy::gradient(const Eigen::VectorXd& x) const {
    if (x.size() != a_.rows()) throw Error("gradient argument has the wrong dimension");
    return a_ * x;
}

bool QuadraticEnergy::kernel_is_zero_free() const {
    if (cls_.kernel_basis.cols() != 1) return false;
    const Eigen::VectorXd v = cls_.kernel_basis.col(0);
    const double threshold = 1e-9 * v.norm();
    return (v.cwiseAbs().array() > threshold).all();
}

double disagreement(const Eigen::MatrixXd& laplacian, const Eigen::VectorXd& x) {
    if (laplacian.rows() != laplacian.cols() || laplacian.rows() != x.size()) {
        throw Error("disagreement requires a square matrix matching the state dimension");
    }
    return 0.5 * x.dot(laplacian * x);
}

}  // namespace platoonsim
