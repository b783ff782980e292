#include "coreset/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "coreset/csv.hpp"
#include "coreset/errors.hpp"
#include "coreset/rng.hpp"

namespace coreset {

void LabeledDataset::validate() const {
    if (X.rows() != y.size()) {
        throw DataError(name + ": X has " + std::to_string(X.rows()) +
                        " rows but y has " + std::to_string(y.size()));
    }
    if (!X.allFinite()) {
        throw DataError(name + ": non-finite feature entries");
    }
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (y[i] != 1 && y[i] != -1) {
            throw DataError(name + ": label at row " + std::to_string(i) +
                            " is " + std::to_string(y[i]) + ", expected -1 or +1");
        }
    }
    if (has_intercept) {
        if (X.cols() == 0 || (X.col(0).array() != 1.0).any()) {
            throw DataError(name + ": intercept flag set but column 0 is not all ones");
        }
    }
}

LabeledDataset LabeledDataset::subset(const std::vector<Eigen::Index>& idx) const {
    LabeledDataset out;
    out.X.resize(static_cast<Eigen::Index>(idx.size()), X.cols());
    out.y.resize(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) {
        out.X.row(static_cast<Eigen::Index>(j)) = X.row(idx[j]);
        out.y[static_cast<Eigen::Index>(j)] = y[idx[j]];
    }
    out.has_intercept = has_intercept;
    out.name = name;
    return out;
}

Eigen::VectorXd min_max_scale(const Eigen::VectorXd& column,
                              std::pair<double, double> range) {
    if (column.size() == 0) {
        throw DataError("min_max_scale: empty column");
    }
    if (!column.allFinite()) {
        throw DataError("min_max_scale: non-finite entries");
    }
    const auto [lo, hi] = range;
    if (!(lo < hi)) {
        throw ConfigError("min_max_scale: invalid range");
    }
    const double cmin = column.minCoeff();
    const double cmax = column.maxCoeff();
    if (cmin == cmax) {
        return Eigen::VectorXd::Constant(column.size(), lo);
    }
    return ((column.array() - cmin) / (cmax - cmin) * (hi - lo) + lo).matrix();
}

LabeledDataset add_intercept(const LabeledDataset& ds) {
    if (ds.has_intercept) {
        throw UsageError(ds.name + ": dataset already has an intercept column");
    }
    LabeledDataset out;
    out.X.resize(ds.X.rows(), ds.X.cols() + 1);
    out.X.col(0).setOnes();
    out.X.rightCols(ds.X.cols()) = ds.X;
    out.y = ds.y;
    out.has_intercept = true;
    out.name = ds.name;
    return out;
}

namespace {

double parse_numeric(const std::string& cell, std::size_t row, const std::string& col) {
    try {
        std::size_t pos = 0;
        double v = std::stod(cell, &pos);
        if (pos != cell.size()) throw std::invalid_argument(cell);
        return v;
    } catch (const std::exception&) {
        throw DataError("unparseable numeric value '" + cell + "' at row " +
                        std::to_string(row + 1) + ", column " + col);
    }
}

}  // namespace

SplitDataset load_csv(const std::string& path, const PreprocessSpec& spec,
                      std::uint64_t seed) {
    for (const auto& c : spec.numeric_columns) {
        if (std::find(spec.categorical_columns.begin(), spec.categorical_columns.end(),
                      c) != spec.categorical_columns.end()) {
            throw ConfigError("column listed as both numeric and categorical: " + c);
        }
        if (c == spec.label_column) {
            throw ConfigError("label column also listed as a feature: " + c);
        }
    }
    if (!(spec.test_fraction >= 0.0 && spec.test_fraction < 1.0)) {
        throw ConfigError("test_fraction must lie in [0, 1)");
    }

    CsvTable table = read_csv(path, spec.separator);
    const std::size_t n = table.rows.size();
    if (n == 0) {
        throw DataError(path + ": no data rows");
    }
    const std::size_t label_idx = table.column(spec.label_column);
    std::vector<std::size_t> num_idx, cat_idx;
    for (const auto& c : spec.numeric_columns) num_idx.push_back(table.column(c));
    for (const auto& c : spec.categorical_columns) cat_idx.push_back(table.column(c));

    // Category sets are fixed from the full file before splitting so that the
    // column layout is stable across splits.
    std::vector<std::vector<std::string>> categories(cat_idx.size());
    std::vector<std::unordered_map<std::string, int>> cat_pos(cat_idx.size());
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < cat_idx.size(); ++c) {
            const std::string& v = row[cat_idx[c]];
            if (cat_pos[c].emplace(v, static_cast<int>(categories[c].size())).second) {
                categories[c].push_back(v);
            }
        }
    }

    // Labels: positive_label -> +1, the single remaining value -> -1.
    std::string negative_label;
    bool have_negative = false;
    for (std::size_t r = 0; r < n; ++r) {
        const std::string& v = table.rows[r][label_idx];
        if (v == spec.positive_label) continue;
        if (!have_negative) {
            negative_label = v;
            have_negative = true;
        } else if (v != negative_label) {
            throw DataError(path + ": more than two label values ('" + spec.positive_label +
                            "', '" + negative_label + "', '" + v + "')");
        }
    }

    std::size_t d = num_idx.size();
    for (const auto& cats : categories) d += cats.size();

    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                              static_cast<Eigen::Index>(d));
    Eigen::VectorXi y(static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r) {
        const auto& row = table.rows[r];
        Eigen::Index col = 0;
        for (std::size_t c = 0; c < num_idx.size(); ++c) {
            X(static_cast<Eigen::Index>(r), col++) =
                parse_numeric(row[num_idx[c]], r, spec.numeric_columns[c]);
        }
        for (std::size_t c = 0; c < cat_idx.size(); ++c) {
            int pos = cat_pos[c].at(row[cat_idx[c]]);
            X(static_cast<Eigen::Index>(r), col + pos) = 1.0;
            col += static_cast<Eigen::Index>(categories[c].size());
        }
        y[static_cast<Eigen::Index>(r)] = (row[label_idx] == spec.positive_label) ? 1 : -1;
    }

    // Seeded shuffle; the first ceil(test_fraction * n) rows become the test set.
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    Rng rng(mix64(seed));
    for (std::size_t i = n - 1; i > 0; --i) {
        std::size_t j = rng.next_index(i + 1);
        std::swap(order[i], order[j]);
    }
    const std::size_t n_test =
        static_cast<std::size_t>(std::ceil(spec.test_fraction * static_cast<double>(n)));
    std::vector<Eigen::Index> test_rows(order.begin(), order.begin() + n_test);
    std::vector<Eigen::Index> train_rows(order.begin() + n_test, order.end());
    std::sort(test_rows.begin(), test_rows.end());
    std::sort(train_rows.begin(), train_rows.end());

    // Numeric scaling uses training-split statistics only; test values outside
    // the train range map outside [lo, hi].
    const auto [lo, hi] = spec.scale_range;
    if (!(lo < hi)) throw ConfigError("scale_range.lo must be < scale_range.hi");
    for (std::size_t c = 0; c < num_idx.size(); ++c) {
        const auto col = static_cast<Eigen::Index>(c);
        double cmin = std::numeric_limits<double>::infinity();
        double cmax = -std::numeric_limits<double>::infinity();
        for (Eigen::Index r : train_rows) {
            cmin = std::min(cmin, X(r, col));
            cmax = std::max(cmax, X(r, col));
        }
        if (cmin == cmax) {
            X.col(col).setConstant(lo);
        } else {
            X.col(col) = ((X.col(col).array() - cmin) / (cmax - cmin) * (hi - lo) + lo).matrix();
        }
    }

    LabeledDataset full{std::move(X), std::move(y), false, path};
    SplitDataset split;
    split.train = full.subset(train_rows);
    split.test = full.subset(test_rows);
    if (spec.add_intercept_column) {
        split.train = add_intercept(split.train);
        split.test = add_intercept(split.test);
    }
    split.train.validate();
    split.test.validate();
    return split;
}

LabeledDataset synthesize_logistic(Eigen::Index n, Eigen::Index d,
                                   const Eigen::VectorXd& beta_true,
                                   std::uint64_t seed) {
    if (n < 1 || d < 1) {
        throw ConfigError("synthesize_logistic: n and d must be positive");
    }
    if (beta_true.size() != d) {
        throw ConfigError("synthesize_logistic: beta_true length mismatch");
    }
    Rng rng(mix64(seed));
    LabeledDataset ds;
    ds.X.resize(n, d);
    ds.y.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            ds.X(i, j) = rng.next_normal();
        }
        const double margin = ds.X.row(i) * beta_true;
        const double p = 1.0 / (1.0 + std::exp(-margin));
        ds.y[i] = (rng.next_double() < p) ? 1 : -1;
    }
    ds.name = "synthetic";
    return ds;
}

}  // namespace coreset
