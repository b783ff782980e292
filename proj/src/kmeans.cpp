#include "coreset/kmeans.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "coreset/errors.hpp"
#include "coreset/kernels.hpp"
#include "coreset/rng.hpp"

namespace coreset {

namespace {

// k-means++: first center uniform, then proportional to squared distance
// from the nearest chosen center.
Eigen::MatrixXd seed_centers(const Eigen::MatrixXd& Z, int k, Rng& rng) {
    const Eigen::Index n = Z.rows();
    Eigen::MatrixXd centers(k, Z.cols());
    centers.row(0) = Z.row(static_cast<Eigen::Index>(rng.next_index(static_cast<std::uint64_t>(n))));
    Eigen::VectorXd dist2(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        dist2[i] = (Z.row(i) - centers.row(0)).squaredNorm();
    }
    for (int c = 1; c < k; ++c) {
        const double total = dist2.sum();
        Eigen::Index pick;
        if (total <= 0.0) {
            // All points coincide with existing centers; fall back to uniform.
            pick = static_cast<Eigen::Index>(rng.next_index(static_cast<std::uint64_t>(n)));
        } else {
            const double u = rng.next_double() * total;
            double acc = 0.0;
            pick = n - 1;
            for (Eigen::Index i = 0; i < n; ++i) {
                acc += dist2[i];
                if (u < acc) {
                    pick = i;
                    break;
                }
            }
        }
        centers.row(c) = Z.row(pick);
        for (Eigen::Index i = 0; i < n; ++i) {
            dist2[i] = std::min(dist2[i], (Z.row(i) - centers.row(c)).squaredNorm());
        }
    }
    return centers;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& Z, int k, std::uint64_t seed,
                    int max_iter, double rel_tol) {
    const Eigen::Index n = Z.rows();
    if (k < 1 || static_cast<Eigen::Index>(k) > n) {
        throw ConfigError("kmeans: need 1 <= k <= n");
    }
    Rng rng(mix64(seed));
    KMeansResult res;
    res.centers = seed_centers(Z, k, rng);

    double prev_inertia = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < max_iter; ++iter) {
        kernels::nearest_center(Z, res.centers, res.assign);

        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, Z.cols());
        std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
        double inertia = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const int c = res.assign[i];
            sums.row(c) += Z.row(i);
            ++counts[static_cast<std::size_t>(c)];
            inertia += (Z.row(i) - res.centers.row(c)).squaredNorm();
        }
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) {
                res.centers.row(c) =
                    sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
            }
            // Empty clusters keep their previous center.
        }
        res.inertia = inertia;
        res.iterations = iter + 1;
        if (prev_inertia < std::numeric_limits<double>::infinity()) {
            const double denom = std::max(prev_inertia, 1e-300);
            if (std::abs(prev_inertia - inertia) / denom < rel_tol) break;
        }
        prev_inertia = inertia;
    }
    kernels::nearest_center(Z, res.centers, res.assign);
    return res;
}

}  // namespace coreset
