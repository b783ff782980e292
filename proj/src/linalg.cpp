#include "coreset/linalg.hpp"

#include <cmath>

#include "coreset/errors.hpp"

namespace coreset {

namespace {
constexpr double kRankTol = 1e-10;
}

OrthonormalBasis orthonormal_basis(const Eigen::MatrixXd& Z) {
    const Eigen::Index n = Z.rows();
    const Eigen::Index d = Z.cols();
    if (d < 1 || n < d) {
        throw DataError("orthonormal_basis: need n >= d >= 1, got n=" +
                        std::to_string(n) + " d=" + std::to_string(d));
    }
    if (!Z.allFinite()) {
        throw DataError("orthonormal_basis: non-finite entries");
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Z);
    qr.setThreshold(kRankTol);
    const Eigen::Index r = qr.rank();
    if (r == 0) {
        throw NumericalError("orthonormal_basis: matrix has rank zero");
    }
    OrthonormalBasis basis;
    basis.Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, r);
    basis.r = r;
    return basis;
}

Eigen::VectorXd leverage_scores(const Eigen::MatrixXd& Z) {
    const OrthonormalBasis basis = orthonormal_basis(Z);
    return basis.Q.rowwise().squaredNorm();
}

Eigen::VectorXd lewis_weights(const Eigen::MatrixXd& Z, int t) {
    if (t < 1) {
        throw ConfigError("lewis_weights: t must be >= 1");
    }
    const Eigen::Index n = Z.rows();
    Eigen::VectorXd w = Eigen::VectorXd::Ones(n);
    Eigen::MatrixXd scaled(n, Z.cols());
    for (int iter = 0; iter < t; ++iter) {
        for (Eigen::Index i = 0; i < n; ++i) {
            scaled.row(i) = Z.row(i) / std::sqrt(w[i]);
        }
        const Eigen::VectorXd tau = leverage_scores(scaled);
        for (Eigen::Index i = 0; i < n; ++i) {
            w[i] = std::sqrt(w[i] * tau[i]);
            if (w[i] < 1e-300) {
                throw NumericalError("lewis_weights: weight underflow at row " +
                                     std::to_string(i));
            }
        }
    }
    return w;
}

}  // namespace coreset
