#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace coreset {

/// Dense feature matrix with ±1 labels. Immutable after construction.
struct LabeledDataset {
    Eigen::MatrixXd X;      // n x d
    Eigen::VectorXi y;      // entries in {-1, +1}
    bool has_intercept = false;  // column 0 identically 1 when set
    std::string name;

    Eigen::Index rows() const { return X.rows(); }
    Eigen::Index cols() const { return X.cols(); }

    // Throws DataError on NaN/Inf entries, labels outside {-1,+1}, or an
    // intercept column that is not all ones.
    void validate() const;

    LabeledDataset subset(const std::vector<Eigen::Index>& idx) const;
};

struct SplitDataset {
    LabeledDataset train;
    LabeledDataset test;
};

struct PreprocessSpec {
    std::vector<std::string> numeric_columns;
    std::vector<std::string> categorical_columns;
    std::pair<double, double> scale_range{-1.0, 1.0};
    double test_fraction = 0.05;
    std::string label_column;
    std::string positive_label;
    bool add_intercept_column = true;
    char separator = ',';
};

// Affine map sending min->lo, max->hi; constant columns map to lo.
Eigen::VectorXd min_max_scale(const Eigen::VectorXd& column,
                              std::pair<double, double> range);

// Prepends an all-ones column. Throws UsageError if already present.
LabeledDataset add_intercept(const LabeledDataset& ds);

// One-hot encodes categoricals (first-appearance category order, fixed from
// the full file), min-max scales numerics using training-split statistics,
// maps labels to ±1 and splits rows with a seeded shuffle.
SplitDataset load_csv(const std::string& path, const PreprocessSpec& spec,
                      std::uint64_t seed);

// Gaussian features, labels drawn from the logistic model at beta_true.
LabeledDataset synthesize_logistic(Eigen::Index n, Eigen::Index d,
                                   const Eigen::VectorXd& beta_true,
                                   std::uint64_t seed);

}  // namespace coreset
