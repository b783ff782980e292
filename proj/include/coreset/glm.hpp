#pragma once

#include <Eigen/Dense>

#include "coreset/dataset.hpp"

namespace coreset {

struct FitConfig {
    double lambda2 = 1e-5;  // L2 strength
    double lambda1 = 0.0;   // L1 strength
    double tol = 1e-8;      // optimality residual threshold
    int max_iter = 200;
};

struct FitResult {
    Eigen::VectorXd beta;
    bool converged = false;
    int iterations = 0;
    double objective = 0.0;
    double grad_norm = 0.0;  // optimality residual (minimal subgradient norm for L1)
};

// Objective: (1/(2m)) sum_j w_j log(1+exp(-y_j x_j^T beta))
//            + lambda2 ||beta'||^2 + lambda1 ||beta'||_1
// where beta' excludes the intercept coordinate when ds.has_intercept.
double objective_value(const LabeledDataset& ds, const Eigen::VectorXd& weights,
                       const Eigen::VectorXd& beta, const FitConfig& cfg);

// Gradient of the smooth part (data loss + L2 penalty).
Eigen::VectorXd objective_gradient(const LabeledDataset& ds,
                                   const Eigen::VectorXd& weights,
                                   const Eigen::VectorXd& beta, const FitConfig& cfg);

// Minimizes the objective above. Non-convergence within max_iter yields
// converged=false, not an exception.
FitResult fit_weighted(const LabeledDataset& ds, const Eigen::VectorXd& weights,
                       const FitConfig& cfg);

// sigma(x_i^T beta), overflow-safe.
Eigen::VectorXd predict_proba(const Eigen::VectorXd& beta, const Eigen::MatrixXd& X);

// Unregularized, unweighted log-loss sum_i log(1+exp(-y_i x_i^T beta)).
double nll(const Eigen::VectorXd& beta, const LabeledDataset& ds);

// Rank-based AUC with midranks for ties. Throws DataError on single-class y.
double roc_auc(const Eigen::VectorXd& scores, const Eigen::VectorXi& y);

}  // namespace coreset
