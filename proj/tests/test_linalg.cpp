#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "coreset/dataset.hpp"
#include "coreset/errors.hpp"
#include "coreset/linalg.hpp"
#include "coreset/rng.hpp"

using namespace coreset;

namespace {

Eigen::MatrixXd random_gaussian(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXd Z(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            Z(i, j) = rng.next_normal();
        }
    }
    return Z;
}

// Independent oracle: hat-matrix diagonal of Z (Z^T Z)^{-1} Z^T.
Eigen::VectorXd hat_diagonal(const Eigen::MatrixXd& Z) {
    const Eigen::MatrixXd H = Z * (Z.transpose() * Z).inverse() * Z.transpose();
    return H.diagonal();
}

}  // namespace

TEST_CASE("orthonormal_basis on the identity") {
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(2, 2);
    const OrthonormalBasis basis = orthonormal_basis(I);
    CHECK(basis.r == 2);
    CHECK(basis.Q.row(0).norm() == doctest::Approx(1.0));
    CHECK(basis.Q.row(1).norm() == doctest::Approx(1.0));
}

TEST_CASE("orthonormal_basis matches the hat-matrix diagonal") {
    Eigen::MatrixXd Z(3, 2);
    Z << 1, 0, 1, 0, 0, 1;
    const OrthonormalBasis basis = orthonormal_basis(Z);
    CHECK(basis.r == 2);
    const Eigen::VectorXd diag = (basis.Q * basis.Q.transpose()).diagonal();
    CHECK(diag[0] == doctest::Approx(0.5));
    CHECK(diag[1] == doctest::Approx(0.5));
    CHECK(diag[2] == doctest::Approx(1.0));
}

TEST_CASE("orthonormal_basis detects rank deficiency and bad shapes") {
    Eigen::MatrixXd Z = random_gaussian(5, 3, 1);
    Z.col(2) = Z.col(0);
    CHECK(orthonormal_basis(Z).r == 2);

    CHECK_THROWS_AS(orthonormal_basis(Eigen::MatrixXd::Random(2, 3)), DataError);
    CHECK_THROWS_AS(orthonormal_basis(Eigen::MatrixXd::Zero(3, 2)), NumericalError);
}

TEST_CASE("orthonormal columns invariant") {
    const Eigen::MatrixXd Z = random_gaussian(40, 7, 5);
    const OrthonormalBasis basis = orthonormal_basis(Z);
    const Eigen::MatrixXd gram = basis.Q.transpose() * basis.Q;
    CHECK((gram - Eigen::MatrixXd::Identity(basis.r, basis.r)).cwiseAbs().maxCoeff() <
          1e-8);
}

TEST_CASE("leverage_scores: identity, oracle, sum rule and bounds") {
    const Eigen::VectorXd tau_id = leverage_scores(Eigen::MatrixXd::Identity(3, 3));
    CHECK((tau_id - Eigen::VectorXd::Ones(3)).cwiseAbs().maxCoeff() < 1e-12);

    Eigen::MatrixXd Z(3, 2);
    Z << 1, 0, 1, 0, 0, 1;
    const Eigen::VectorXd tau = leverage_scores(Z);
    CHECK(tau[0] == doctest::Approx(0.5));
    CHECK(tau[1] == doctest::Approx(0.5));
    CHECK(tau[2] == doctest::Approx(1.0));

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Eigen::MatrixXd R = random_gaussian(30, 6, seed);
        const Eigen::VectorXd t = leverage_scores(R);
        CHECK(std::abs(t.sum() - 6.0) < 1e-8);
        CHECK(t.minCoeff() >= -1e-12);
        CHECK(t.maxCoeff() <= 1.0 + 1e-12);
        // Cross-check against the direct hat-matrix formula.
        const Eigen::VectorXd oracle = hat_diagonal(R);
        CHECK((t - oracle).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("lewis_weights: identity fixed point") {
    const Eigen::VectorXd w = lewis_weights(Eigen::MatrixXd::Identity(4, 4), 7);
    CHECK((w - Eigen::VectorXd::Ones(4)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("lewis_weights: fixed-point self-consistency on the 3x2 fixture") {
    Eigen::MatrixXd Z(3, 2);
    Z << 1, 0, 1, 0, 0, 1;
    const Eigen::VectorXd w = lewis_weights(Z, 20);
    Eigen::MatrixXd scaled(3, 2);
    for (Eigen::Index i = 0; i < 3; ++i) {
        scaled.row(i) = Z.row(i) / std::sqrt(w[i]);
    }
    const Eigen::VectorXd tau = leverage_scores(scaled);
    double residual = 0.0;
    for (Eigen::Index i = 0; i < 3; ++i) {
        residual = std::max(residual, std::abs(w[i] - std::sqrt(w[i] * tau[i])));
    }
    CHECK(residual < 1e-6);
    CHECK(w.minCoeff() > 0.0);
}

TEST_CASE("lewis_weights: t=20 convergence surrogate on random matrices") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Eigen::MatrixXd Z = random_gaussian(200, 5, seed + 100);
        const Eigen::VectorXd w20 = lewis_weights(Z, 20);
        const Eigen::VectorXd w21 = lewis_weights(Z, 21);
        CHECK((w21 - w20).cwiseAbs().maxCoeff() < 1e-4);
        CHECK(w20.minCoeff() > 0.0);
    }
}

TEST_CASE("lewis_weights: scaling behaviour and mass") {
    // Scaling the whole matrix leaves the weights unchanged, and they sum to
    // the column dimension.
    Eigen::MatrixXd Z = random_gaussian(50, 4, 9);
    const Eigen::VectorXd w = lewis_weights(Z, 60);
    const Eigen::VectorXd w_scaled = lewis_weights(3.0 * Z, 60);
    CHECK((w - w_scaled).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(w.sum() == doctest::Approx(4.0).epsilon(1e-10));

    // Scaling one row by alpha multiplies its weight by alpha up to an
    // O(1/n) normalization shift, so use a large matrix and a loose band.
    Eigen::MatrixXd big = random_gaussian(2000, 4, 9);
    const Eigen::VectorXd w_base = lewis_weights(big, 60);
    const double alpha = 3.0;
    big.row(7) *= alpha;
    const Eigen::VectorXd w_row = lewis_weights(big, 60);
    CHECK(w_row[7] / w_base[7] == doctest::Approx(alpha).epsilon(0.01));
}

TEST_CASE("lewis_weights rejects bad t") {
    CHECK_THROWS_AS(lewis_weights(Eigen::MatrixXd::Identity(2, 2), 0), ConfigError);
}
