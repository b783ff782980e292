#pragma once

#include <Eigen/Dense>

namespace coreset {

struct OrthonormalBasis {
    Eigen::MatrixXd Q;   // n x r, Q^T Q = I_r
    Eigen::Index r = 0;  // numerical rank
};

// Orthonormal basis of the column space of Z via column-pivoted QR.
// Pivots below 1e-10 of the largest are treated as zero rank.
OrthonormalBasis orthonormal_basis(const Eigen::MatrixXd& Z);

// Hat-matrix diagonal: tau_i = ||Q_i||^2, with sum tau = rank.
Eigen::VectorXd leverage_scores(const Eigen::MatrixXd& Z);

// l1 Lewis weights by fixed-point iteration: w = 1; t times
// w_i <- sqrt(w_i * tau_i(W^{-1/2} Z)).
Eigen::VectorXd lewis_weights(const Eigen::MatrixXd& Z, int t);

}  // namespace coreset
