#pragma once

#include <Eigen/Dense>

// Data-parallel inner loops shared by the samplers, the GLM, and k-means.
// Each kernel has an OpenMP version (the one the library calls) and a serial
// reference used by the tests and the kernel benchmark. Reductions sum fixed
// 1024-element blocks and combine them in block order, so results do not
// depend on the number of threads.

namespace coreset::kernels {

inline constexpr Eigen::Index kBlock = 1024;

// out_i = x_i^T beta
void margins(const Eigen::MatrixXd& X, const Eigen::VectorXd& beta,
             Eigen::VectorXd& out);
void margins_serial(const Eigen::MatrixXd& X, const Eigen::VectorXd& beta,
                    Eigen::VectorXd& out);

// sum_i w_i * log(1 + exp(-y_i * margin_i)), overflow-safe.
double weighted_logloss(const Eigen::VectorXd& margin, const Eigen::VectorXi& y,
                        const Eigen::VectorXd& w);
double weighted_logloss_serial(const Eigen::VectorXd& margin, const Eigen::VectorXi& y,
                               const Eigen::VectorXd& w);

// Euclidean norm of every row.
void row_norms(const Eigen::MatrixXd& X, Eigen::VectorXd& out);
void row_norms_serial(const Eigen::MatrixXd& X, Eigen::VectorXd& out);

// Index of the nearest center (squared Euclidean) per row; ties go to the
// lowest center index.
void nearest_center(const Eigen::MatrixXd& Z, const Eigen::MatrixXd& centers,
                    Eigen::VectorXi& assign);
void nearest_center_serial(const Eigen::MatrixXd& Z, const Eigen::MatrixXd& centers,
                           Eigen::VectorXi& assign);

// Numerically stable log(1 + exp(-t)).
inline double logistic_loss(double t) {
    if (t > 0) return std::log1p(std::exp(-t));
    return -t + std::log1p(std::exp(t));
}

// Overflow-safe sigmoid.
inline double sigmoid(double t) {
    if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

}  // namespace coreset::kernels
