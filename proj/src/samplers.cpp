#include "coreset/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "coreset/errors.hpp"
#include "coreset/kernels.hpp"
#include "coreset/kmeans.hpp"
#include "coreset/linalg.hpp"
#include "coreset/rng.hpp"

namespace coreset {

std::string method_name(Method m) {
    switch (m) {
        case Method::uniform: return "uniform";
        case Method::kmeans: return "kmeans";
        case Method::leverage: return "leverage";
        case Method::monotonic: return "monotonic";
        case Method::lewis: return "lewis";
        case Method::osmac_vc: return "osmac_vc";
        case Method::osmac_mse: return "osmac_mse";
    }
    throw UsageError("unknown method enum");
}

Method method_from_name(const std::string& name) {
    for (Method m : {Method::uniform, Method::kmeans, Method::leverage,
                     Method::monotonic, Method::lewis, Method::osmac_vc,
                     Method::osmac_mse}) {
        if (method_name(m) == name) return m;
    }
    throw ConfigError("unknown method: " + name);
}

bool method_is_randomized(Method m) {
    return m == Method::kmeans || m == Method::osmac_vc || m == Method::osmac_mse;
}

namespace {

// Raw zero scores are clamped to a positive floor so weights stay finite.
ScoreVector finalize(Eigen::VectorXd s, Method m) {
    if (!s.allFinite() || (s.array() < 0.0).any()) {
        throw NumericalError("score vector has negative or non-finite entries");
    }
    const double smax = s.maxCoeff();
    const double floor = (smax > 0.0) ? 1e-12 * smax : 1.0;
    s = s.cwiseMax(floor);
    return ScoreVector{std::move(s), m};
}

// Rows of Z_i = sign * y_i * x_i, optionally without the intercept column.
Eigen::MatrixXd signed_rows(const LabeledDataset& ds, double sign, bool drop_intercept) {
    const Eigen::Index skip = (drop_intercept && ds.has_intercept) ? 1 : 0;
    Eigen::MatrixXd Z = ds.X.rightCols(ds.cols() - skip);
    for (Eigen::Index i = 0; i < Z.rows(); ++i) {
        Z.row(i) *= sign * static_cast<double>(ds.y[i]);
    }
    return Z;
}

std::vector<Eigen::Index> sample_without_replacement(Eigen::Index n, Eigen::Index m,
                                                     Rng& rng) {
    std::vector<Eigen::Index> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), Eigen::Index{0});
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto j = i + static_cast<Eigen::Index>(
                               rng.next_index(static_cast<std::uint64_t>(n - i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(m));
    return pool;
}

}  // namespace

ScoreVector scores_uniform(const LabeledDataset& ds) {
    return finalize(Eigen::VectorXd::Ones(ds.rows()), Method::uniform);
}

ScoreVector scores_kmeans(const LabeledDataset& ds, int k, double R,
                          Eigen::Index cluster_subsample, std::uint64_t seed) {
    const Eigen::Index n = ds.rows();
    if (k < 1 || static_cast<Eigen::Index>(k) > n) {
        throw ConfigError("scores_kmeans: need 1 <= k <= n");
    }
    if (R <= 0.0) {
        throw ConfigError("scores_kmeans: R must be positive");
    }
    const Eigen::MatrixXd Z = signed_rows(ds, 1.0, false);

    Rng rng(mix64(seed));
    const Eigen::Index sub = std::min<Eigen::Index>(n, std::max<Eigen::Index>(cluster_subsample, k));
    Eigen::MatrixXd Zsub(sub, Z.cols());
    {
        const auto pick = sample_without_replacement(n, sub, rng);
        for (Eigen::Index i = 0; i < sub; ++i) {
            Zsub.row(i) = Z.row(pick[static_cast<std::size_t>(i)]);
        }
    }
    const KMeansResult km = kmeans(Zsub, k, rng.next_u64());

    Eigen::VectorXi assign;
    kernels::nearest_center(Z, km.centers, assign);

    // Per-cluster counts and sums over all n points.
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, Z.cols());
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
    for (Eigen::Index i = 0; i < n; ++i) {
        sums.row(assign[i]) += Z.row(i);
        counts[assign[i]] += 1.0;
    }

    // s_i = n / (1 + sum_j |G_j^(-i)| exp(-R ||mean_j^(-i) - Z_i||)), where
    // only i's own cluster excludes Z_i; clusters emptied by the exclusion
    // contribute nothing.
    Eigen::VectorXd s(n);
    const Eigen::Index nb = (n + kernels::kBlock - 1) / kernels::kBlock;
#pragma omp parallel for schedule(static)
    for (Eigen::Index b = 0; b < nb; ++b) {
        const Eigen::Index lo = b * kernels::kBlock;
        const Eigen::Index hi = std::min(lo + kernels::kBlock, n);
        for (Eigen::Index i = lo; i < hi; ++i) {
            double denom = 1.0;
            for (int c = 0; c < k; ++c) {
                double cnt = counts[c];
                Eigen::RowVectorXd mean_c;
                if (c == assign[i]) {
                    cnt -= 1.0;
                    if (cnt <= 0.0) continue;
                    mean_c = (sums.row(c) - Z.row(i)) / cnt;
                } else {
                    if (cnt <= 0.0) continue;
                    mean_c = sums.row(c) / cnt;
                }
                denom += cnt * std::exp(-R * (mean_c - Z.row(i)).norm());
            }
            s[i] = static_cast<double>(n) / denom;
        }
    }
    return finalize(std::move(s), Method::kmeans);
}

ScoreVector scores_leverage(const LabeledDataset& ds, bool binning) {
    const Eigen::MatrixXd Z = signed_rows(ds, -1.0, true);
    const Eigen::VectorXd tau = leverage_scores(Z);
    const auto n = static_cast<double>(ds.rows());
    Eigen::VectorXd s = tau.array().sqrt() + 1.0 / n;
    if (binning) {
        // Round each probability up to the nearest power-of-2 multiple of the
        // minimum; renormalization happens inside sample_coreset.
        Eigen::VectorXd p = s / s.sum();
        const double pmin = p.minCoeff();
        for (Eigen::Index i = 0; i < p.size(); ++i) {
            const double e = std::ceil(std::log2(p[i] / pmin) - 1e-12);
            p[i] = pmin * std::exp2(e);
        }
        s = p;
    }
    return finalize(std::move(s), Method::leverage);
}

ScoreVector scores_monotonic(const LabeledDataset& ds, double lambda2) {
    if (lambda2 <= 0.0) {
        throw ConfigError("scores_monotonic: regularization strength must be positive");
    }
    const Eigen::Index n = ds.rows();
    const double k = 1.0 / (2.0 * lambda2);
    Eigen::VectorXd norms;
    kernels::row_norms(ds.X, norms);

    // Non-increasing by norm; ties broken by original row index.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (norms[a] != norms[b]) return norms[a] > norms[b];
        return a < b;
    });

    Eigen::VectorXd s(n);
    const double scale = 132.0 * std::sqrt(k);
    for (Eigen::Index pos = 0; pos < n; ++pos) {
        const Eigen::Index i = order[static_cast<std::size_t>(pos)];
        s[i] = (scale * norms[i] + 2.0) / static_cast<double>(pos + 1);
    }
    return finalize(std::move(s), Method::monotonic);
}

ScoreVector scores_lewis(const LabeledDataset& ds, int t) {
    const Eigen::MatrixXd Z = signed_rows(ds, 1.0, true);
    return finalize(lewis_weights(Z, t), Method::lewis);
}

FitResult pilot_estimate(const LabeledDataset& ds, Eigen::Index m_pilot,
                         std::uint64_t seed, const FitConfig& fit) {
    if (m_pilot < 2) {
        throw ConfigError("pilot_estimate: pilot size must be >= 2");
    }
    const Eigen::Index n = ds.rows();
    const Eigen::Index m = std::min(m_pilot, n);
    Rng rng(mix64(seed));
    for (int attempt = 0; attempt < 10; ++attempt) {
        const auto pick = sample_without_replacement(n, m, rng);
        Eigen::Index n_pos = 0;
        for (Eigen::Index i : pick) {
            if (ds.y[i] == 1) ++n_pos;
        }
        const Eigen::Index n_neg = m - n_pos;
        if (n_pos == 0 || n_neg == 0) continue;

        const LabeledDataset pilot = ds.subset(pick);
        // Balance classes: each class gets total weight m/2.
        Eigen::VectorXd w(m);
        const double w_pos = static_cast<double>(m) / (2.0 * static_cast<double>(n_pos));
        const double w_neg = static_cast<double>(m) / (2.0 * static_cast<double>(n_neg));
        for (Eigen::Index j = 0; j < m; ++j) {
            w[j] = (pilot.y[j] == 1) ? w_pos : w_neg;
        }
        return fit_weighted(pilot, w, fit);
    }
    throw NumericalError("pilot_estimate: single-class pilot after 10 attempts");
}

ScoreVector scores_osmac(const LabeledDataset& ds, const Eigen::VectorXd& pilot_beta,
                         OsmacVariant variant) {
    if (pilot_beta.size() != ds.cols()) {
        throw DataError("scores_osmac: pilot_beta length mismatch");
    }
    const Eigen::Index n = ds.rows();
    const Eigen::VectorXd p = predict_proba(pilot_beta, ds.X);
    Eigen::VectorXd resid(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double y01 = (static_cast<double>(ds.y[i]) + 1.0) / 2.0;
        resid[i] = std::abs(y01 - p[i]);
    }

    Eigen::VectorXd s(n);
    if (variant == OsmacVariant::vc) {
        Eigen::VectorXd norms;
        kernels::row_norms(ds.X, norms);
        s = resid.cwiseProduct(norms);
    } else {
        // M_X = (1/n) sum p_i (1-p_i) x_i x_i^T; s_i = resid_i * ||M_X^{-1} x_i||.
        const Eigen::VectorXd v = (p.array() * (1.0 - p.array())).matrix() /
                                  static_cast<double>(n);
        const Eigen::MatrixXd M = ds.X.transpose() * v.asDiagonal() * ds.X;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
        const Eigen::VectorXd& ev = es.eigenvalues();
        const double emax = ev[ev.size() - 1];
        const double emin = ev[0];
        if (emin <= 0.0 || emax / emin > 1e12) {
            throw NumericalError("scores_osmac: information matrix numerically singular");
        }
        const Eigen::MatrixXd Minv =
            es.eigenvectors() * ev.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
        const Eigen::MatrixXd V = ds.X * Minv;  // row i is (M^{-1} x_i)^T
        Eigen::VectorXd vnorms;
        kernels::row_norms(V, vnorms);
        s = resid.cwiseProduct(vnorms);
    }
    return finalize(std::move(s),
                    variant == OsmacVariant::vc ? Method::osmac_vc : Method::osmac_mse);
}

ScoreOutcome compute_scores(const LabeledDataset& ds, const SamplerConfig& cfg,
                            Eigen::Index m, std::uint64_t seed, const FitConfig& fit) {
    ScoreOutcome out;
    switch (cfg.method) {
        case Method::uniform:
            out.scores = scores_uniform(ds);
            break;
        case Method::kmeans:
            out.scores = scores_kmeans(ds, cfg.kmeans_k, cfg.kmeans_R,
                                       cfg.kmeans_cluster_subsample, seed);
            break;
        case Method::leverage:
            out.scores = scores_leverage(ds, cfg.leverage_binning);
            break;
        case Method::monotonic:
            out.scores = scores_monotonic(ds, cfg.lambda_for_monotonic);
            break;
        case Method::lewis:
            out.scores = scores_lewis(ds, cfg.lewis_t);
            break;
        case Method::osmac_vc:
        case Method::osmac_mse: {
            const auto m_pilot = static_cast<Eigen::Index>(
                std::ceil(cfg.pilot_fraction * static_cast<double>(m)));
            const FitResult pilot =
                pilot_estimate(ds, std::max<Eigen::Index>(m_pilot, 2), seed, fit);
            const auto variant = (cfg.method == Method::osmac_vc) ? OsmacVariant::vc
                                                                  : OsmacVariant::mse;
            try {
                out.scores = scores_osmac(ds, pilot.beta, variant);
            } catch (const NumericalError&) {
                if (variant == OsmacVariant::mse && cfg.osmac_fallback) {
                    out.scores = scores_osmac(ds, pilot.beta, OsmacVariant::vc);
                    out.scores.method = Method::osmac_mse;
                    out.fallback_used = true;
                } else {
                    throw;
                }
            }
            break;
        }
    }
    return out;
}

CoresetSample sample_coreset(const ScoreVector& scores, Eigen::Index m,
                             std::uint64_t seed) {
    if (m < 1) {
        throw ConfigError("sample_coreset: m must be >= 1");
    }
    const Eigen::Index n = scores.s.size();
    const double total = scores.s.sum();
    CoresetSample cs;
    cs.probabilities_used = scores.s / total;

    Eigen::VectorXd cdf(n);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        acc += cs.probabilities_used[i];
        cdf[i] = acc;
    }
    cdf[n - 1] = 1.0;

    Rng rng(mix64(seed));
    cs.indices.resize(static_cast<std::size_t>(m));
    cs.weights.resize(m);
    for (Eigen::Index j = 0; j < m; ++j) {
        const double u = rng.next_double();
        const auto it = std::lower_bound(cdf.data(), cdf.data() + n, u,
                                         [](double c, double val) { return c <= val; });
        const auto idx = static_cast<Eigen::Index>(it - cdf.data());
        cs.indices[static_cast<std::size_t>(j)] = idx;
        cs.weights[j] = 1.0 / (cs.probabilities_used[idx] * static_cast<double>(n));
    }
    return cs;
}

}  // namespace coreset
