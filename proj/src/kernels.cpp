#include "coreset/kernels.hpp"

#include <vector>

namespace coreset::kernels {

namespace {

inline Eigen::Index n_blocks(Eigen::Index n) { return (n + kBlock - 1) / kBlock; }

}  // namespace

void margins(const Eigen::MatrixXd& X, const Eigen::VectorXd& beta,
             Eigen::VectorXd& out) {
    const Eigen::Index n = X.rows();
    out.resize(n);
    const Eigen::Index nb = n_blocks(n);
#pragma omp parallel for schedule(static)
    for (Eigen::Index b = 0; b < nb; ++b) {
        const Eigen::Index lo = b * kBlock;
        const Eigen::Index len = std::min(kBlock, n - lo);
        out.segment(lo, len).noalias() = X.middleRows(lo, len) * beta;
    }
}

void margins_serial(const Eigen::MatrixXd& X, const Eigen::VectorXd& beta,
                    Eigen::VectorXd& out) {
    const Eigen::Index n = X.rows();
    out.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out[i] = X.row(i).dot(beta);
    }
}

double weighted_logloss(const Eigen::VectorXd& margin, const Eigen::VectorXi& y,
                        const Eigen::VectorXd& w) {
    const Eigen::Index n = margin.size();
    const Eigen::Index nb = n_blocks(n);
    std::vector<double> partial(static_cast<std::size_t>(nb), 0.0);
#pragma omp parallel for schedule(static)
    for (Eigen::Index b = 0; b < nb; ++b) {
        const Eigen::Index lo = b * kBlock;
        const Eigen::Index hi = std::min(lo + kBlock, n);
        double s = 0.0;
        for (Eigen::Index i = lo; i < hi; ++i) {
            s += w[i] * logistic_loss(static_cast<double>(y[i]) * margin[i]);
        }
        partial[static_cast<std::size_t>(b)] = s;
    }
    double total = 0.0;
    for (double s : partial) total += s;
    return total;
}

double weighted_logloss_serial(const Eigen::VectorXd& margin, const Eigen::VectorXi& y,
                               const Eigen::VectorXd& w) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < margin.size(); ++i) {
        total += w[i] * logistic_loss(static_cast<double>(y[i]) * margin[i]);
    }
    return total;
}

void row_norms(const Eigen::MatrixXd& X, Eigen::VectorXd& out) {
    const Eigen::Index n = X.rows();
    out.resize(n);
    const Eigen::Index nb = n_blocks(n);
#pragma omp parallel for schedule(static)
    for (Eigen::Index b = 0; b < nb; ++b) {
        const Eigen::Index lo = b * kBlock;
        const Eigen::Index hi = std::min(lo + kBlock, n);
        for (Eigen::Index i = lo; i < hi; ++i) {
            out[i] = X.row(i).norm();
        }
    }
}

void row_norms_serial(const Eigen::MatrixXd& X, Eigen::VectorXd& out) {
    const Eigen::Index n = X.rows();
    out.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out[i] = X.row(i).norm();
    }
}

void nearest_center(const Eigen::MatrixXd& Z, const Eigen::MatrixXd& centers,
                    Eigen::VectorXi& assign) {
    const Eigen::Index n = Z.rows();
    const Eigen::Index k = centers.rows();
    assign.resize(n);
    const Eigen::Index nb = n_blocks(n);
#pragma omp parallel for schedule(static)
    for (Eigen::Index b = 0; b < nb; ++b) {
        const Eigen::Index lo = b * kBlock;
        const Eigen::Index hi = std::min(lo + kBlock, n);
        for (Eigen::Index i = lo; i < hi; ++i) {
            int best = 0;
            double best_d = (Z.row(i) - centers.row(0)).squaredNorm();
            for (Eigen::Index c = 1; c < k; ++c) {
                const double d = (Z.row(i) - centers.row(c)).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = static_cast<int>(c);
                }
            }
            assign[i] = best;
        }
    }
}

void nearest_center_serial(const Eigen::MatrixXd& Z, const Eigen::MatrixXd& centers,
                           Eigen::VectorXi& assign) {
    const Eigen::Index n = Z.rows();
    const Eigen::Index k = centers.rows();
    assign.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        int best = 0;
        double best_d = (Z.row(i) - centers.row(0)).squaredNorm();
        for (Eigen::Index c = 1; c < k; ++c) {
            const double d = (Z.row(i) - centers.row(c)).squaredNorm();
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(c);
            }
        }
        assign[i] = best;
    }
}

}  // namespace coreset::kernels
