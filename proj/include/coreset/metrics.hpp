#pragma once

#include <Eigen/Dense>
#include <optional>

#include "coreset/dataset.hpp"

namespace coreset {

struct MetricSet {
    double rel_nll_error = 0.0;
    double coef_mse = 0.0;
    double rel_roc = 1.0;
    std::optional<double> support_accuracy;  // L1 runs only
};

// |L(beta_c) - L(beta_full)| / L(beta_full) on the training data, with L the
// unregularized log-loss.
double relative_nll_error(const Eigen::VectorXd& beta_c, const Eigen::VectorXd& beta_full,
                          const LabeledDataset& ds_train);

// Squared Euclidean distance (not divided by d).
double coefficient_mse(const Eigen::VectorXd& beta_c, const Eigen::VectorXd& beta_full);

// AUC(beta_c) / AUC(beta_full) on held-out data.
double relative_roc(const Eigen::VectorXd& beta_c, const Eigen::VectorXd& beta_full,
                    const LabeledDataset& ds_test);

// Fraction of non-intercept coordinates agreeing on |beta_j| > 1e-8.
double support_accuracy(const Eigen::VectorXd& beta_c, const Eigen::VectorXd& beta_full,
                        bool has_intercept);

}  // namespace coreset
