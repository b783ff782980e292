#include "coreset/metrics.hpp"

#include <cmath>

#include "coreset/errors.hpp"
#include "coreset/glm.hpp"
#include "coreset/kernels.hpp"

namespace coreset {

double relative_nll_error(const Eigen::VectorXd& beta_c, const Eigen::VectorXd& beta_full,
                          const LabeledDataset& ds_train) {
    const double l_full = nll(beta_full, ds_train);
    if (l_full <= 0.0) {
        throw NumericalError("relative_nll_error: zero full-data log-loss");
    }
    return std::abs(nll(beta_c, ds_train) - l_full) / l_full;
}

double coefficient_mse(const Eigen::VectorXd& beta_c, const Eigen::VectorXd& beta_full) {
    if (beta_c.size() != beta_full.size()) {
        throw DataError("coefficient_mse: length mismatch");
    }
    return (beta_c - beta_full).squaredNorm();
}

double relative_roc(const Eigen::VectorXd& beta_c, const Eigen::VectorXd& beta_full,
                    const LabeledDataset& ds_test) {
    Eigen::VectorXd score_c, score_full;
    kernels::margins(ds_test.X, beta_c, score_c);
    kernels::margins(ds_test.X, beta_full, score_full);
    return roc_auc(score_c, ds_test.y) / roc_auc(score_full, ds_test.y);
}

double support_accuracy(const Eigen::VectorXd& beta_c, const Eigen::VectorXd& beta_full,
                        bool has_intercept) {
    if (beta_c.size() != beta_full.size()) {
        throw DataError("support_accuracy: length mismatch");
    }
    constexpr double kZero = 1e-8;
    const Eigen::Index start = has_intercept ? 1 : 0;
    const Eigen::Index d = beta_c.size() - start;
    if (d <= 0) {
        throw DataError("support_accuracy: no non-intercept coordinates");
    }
    Eigen::Index agree = 0;
    for (Eigen::Index j = start; j < beta_c.size(); ++j) {
        if ((std::abs(beta_c[j]) > kZero) == (std::abs(beta_full[j]) > kZero)) {
            ++agree;
        }
    }
    return static_cast<double>(agree) / static_cast<double>(d);
}

}  // namespace coreset
