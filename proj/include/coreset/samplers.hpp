#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "coreset/dataset.hpp"
#include "coreset/glm.hpp"

namespace coreset {

enum class Method {
    uniform,
    kmeans,
    leverage,
    monotonic,
    lewis,
    osmac_vc,
    osmac_mse,
};

// Config-string tokens; these exact names appear in output CSVs.
std::string method_name(Method m);
Method method_from_name(const std::string& name);

// True for methods whose score vector depends on a random draw (cluster
// subsample or pilot sample); their seeds incorporate the replication index.
bool method_is_randomized(Method m);

struct ScoreVector {
    Eigen::VectorXd s;  // strictly positive after clamping
    Method method = Method::uniform;
};

struct CoresetSample {
    std::vector<Eigen::Index> indices;        // length m
    Eigen::VectorXd weights;                  // w_j = 1 / (p_{c_j} * n)
    Eigen::VectorXd probabilities_used;       // length n, sums to 1
};

struct SamplerConfig {
    Method method = Method::uniform;
    int kmeans_k = 6;
    double kmeans_R = 1.0;
    Eigen::Index kmeans_cluster_subsample = 10000;  // capped at n
    int lewis_t = 5;
    double pilot_fraction = 0.5;  // pilot size = ceil(pilot_fraction * m)
    bool leverage_binning = false;
    double lambda_for_monotonic = 1e-5;
    bool osmac_fallback = false;  // singular M_X falls back to the vc scores
};

ScoreVector scores_uniform(const LabeledDataset& ds);

ScoreVector scores_kmeans(const LabeledDataset& ds, int k, double R,
                          Eigen::Index cluster_subsample, std::uint64_t seed);

ScoreVector scores_leverage(const LabeledDataset& ds, bool binning);

ScoreVector scores_monotonic(const LabeledDataset& ds, double lambda2);

ScoreVector scores_lewis(const LabeledDataset& ds, int t);

// Uniform pilot subsample with class-balancing instance weights
// n_pilot / (2 * n_pilot,class(i)); resamples up to 10 times if one class
// is missing.
FitResult pilot_estimate(const LabeledDataset& ds, Eigen::Index m_pilot,
                         std::uint64_t seed, const FitConfig& fit);

enum class OsmacVariant { vc, mse };

ScoreVector scores_osmac(const LabeledDataset& ds, const Eigen::VectorXd& pilot_beta,
                         OsmacVariant variant);

struct ScoreOutcome {
    ScoreVector scores;
    bool fallback_used = false;  // OSMAC M_X fallback fired
};

// Dispatches to the per-method score function. m is the target coreset size
// (needed for the OSMAC pilot size).
ScoreOutcome compute_scores(const LabeledDataset& ds, const SamplerConfig& cfg,
                            Eigen::Index m, std::uint64_t seed, const FitConfig& fit);

// Algorithm lines 2-8: normalize scores, draw m indices i.i.d. with
// replacement, attach inverse-probability weights.
CoresetSample sample_coreset(const ScoreVector& scores, Eigen::Index m,
                             std::uint64_t seed);

}  // namespace coreset
