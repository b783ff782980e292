#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coreset/dataset.hpp"
#include "coreset/glm.hpp"
#include "coreset/metrics.hpp"
#include "coreset/samplers.hpp"
#include "coreset/stats.hpp"

namespace coreset {

struct SyntheticSpec {
    Eigen::Index n = 20000;
    Eigen::Index d = 10;
    std::uint64_t seed = 0;
    std::vector<double> beta_true;  // length d; defaults to all ones
    double test_fraction = 0.05;
};

struct DatasetSpec {
    enum class Kind { synthetic, csv, prepared };
    std::string name;
    Kind kind = Kind::synthetic;
    SyntheticSpec synthetic;
    std::string path;             // csv
    PreprocessSpec preprocess;    // csv
    std::string train_path;       // prepared
    std::string test_path;        // prepared
};

// Materializes a train/test pair (with intercept column) for any source kind.
SplitDataset load_dataset(const DatasetSpec& spec);

// Writes/reads the prepared format: plain CSV with feature columns f0..f{d-1}
// (intercept column excluded) and a trailing ±1 "label" column.
void write_prepared(const LabeledDataset& ds, const std::string& path);
LabeledDataset read_prepared(const std::string& path, const std::string& name);

struct ExperimentConfig {
    std::vector<DatasetSpec> datasets;
    std::vector<SamplerConfig> methods;
    Eigen::Index size_lo = 200;
    Eigen::Index size_hi = 100000;
    int size_count = 25;
    int replications = 50;
    std::uint64_t base_seed = 0;
    FitConfig fit;          // lambda2 = 1e-5, lambda1 = 0 by default
    bool l1_mode = false;
    bool identity_mode = false;  // diagnostic: bypass sampling, metrics are (0,0,1)
    // When false the wall_time_ms column is written as 0 so that reruns of the
    // same config produce byte-identical results files.
    bool record_timing = true;
    int parallelism = 1;
};

struct ResultRecord {
    std::string dataset;
    std::string method;
    Eigen::Index size = 0;
    int rep = 0;
    std::optional<MetricSet> metrics;  // absent on per-record failure
    double wall_time_ms = 0.0;
    bool fallback_used = false;
    std::string error;  // empty unless metrics is absent
};

struct AggregateRecord {
    std::string dataset;
    std::string method;
    Eigen::Index size = 0;
    std::string metric;
    double median = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
    int n_ok = 0;
};

// Geometric grid lo..hi, rounded, de-duplicated, filtered to <= n_train.
std::vector<Eigen::Index> size_grid(Eigen::Index lo, Eigen::Index hi, int count,
                                    Eigen::Index n_train);

// Runs the full (dataset x method x size x rep) grid. Per-record failures are
// recorded with an error tag; output order is canonical regardless of
// parallelism.
std::vector<ResultRecord> run_experiment(const ExperimentConfig& cfg);

// Median/quartiles (linear-interpolation quantiles) per cell and metric,
// skipping error-tagged records.
std::vector<AggregateRecord> aggregate(const std::vector<ResultRecord>& records);

enum class ComparisonFamily { vs_uniform, all_pairs };

struct ComparisonRow {
    std::string metric;
    std::string method_a;
    std::string method_b;
    double z = 0.0;
    double p_corrected = 1.0;
};

// Pools per-(dataset,size) medians per method and runs the Dunn test per
// metric. vs_uniform compares every other method against "uniform";
// all_pairs compares the non-uniform methods pairwise.
std::vector<ComparisonRow> compare_report(const std::vector<AggregateRecord>& aggregates,
                                          ComparisonFamily family);

// CSV I/O for the documented schemas.
void write_results_csv(const std::vector<ResultRecord>& records, const std::string& path);
std::vector<ResultRecord> read_results_csv(const std::string& path);
void write_aggregates_csv(const std::vector<AggregateRecord>& aggregates,
                          const std::string& path);
void write_comparisons_csv(const std::vector<ComparisonRow>& rows, const std::string& path);

}  // namespace coreset
