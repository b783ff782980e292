#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace coreset {

struct KMeansResult {
    Eigen::MatrixXd centers;   // k x d
    Eigen::VectorXi assign;    // nearest-center index per input row
    double inertia = 0.0;
    int iterations = 0;
};

// k-means++ seeding followed by Lloyd iterations, stopping after max_iter
// sweeps or when the relative inertia change drops below rel_tol.
KMeansResult kmeans(const Eigen::MatrixXd& Z, int k, std::uint64_t seed,
                    int max_iter = 25, double rel_tol = 1e-4);

}  // namespace coreset
