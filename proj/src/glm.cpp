#include "coreset/glm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "coreset/errors.hpp"
#include "coreset/kernels.hpp"

namespace coreset {

namespace {

using kernels::sigmoid;

// First penalized coordinate (the intercept is excluded from both penalties).
Eigen::Index penalty_start(const LabeledDataset& ds) {
    return ds.has_intercept ? 1 : 0;
}

double penalty_value(const Eigen::VectorXd& beta, Eigen::Index start,
                     const FitConfig& cfg) {
    double l2 = 0.0, l1 = 0.0;
    for (Eigen::Index j = start; j < beta.size(); ++j) {
        l2 += beta[j] * beta[j];
        l1 += std::abs(beta[j]);
    }
    return cfg.lambda2 * l2 + cfg.lambda1 * l1;
}

void check_fit_inputs(const LabeledDataset& ds, const Eigen::VectorXd& weights) {
    if (weights.size() != ds.rows()) {
        throw DataError("fit_weighted: weight length mismatch");
    }
    if (!weights.allFinite() || (weights.array() < 0.0).any()) {
        throw DataError("fit_weighted: weights must be finite and nonnegative");
    }
    if (weights.sum() <= 0.0) {
        throw DataError("fit_weighted: weights are all zero");
    }
}

Eigen::MatrixXd smooth_hessian(const LabeledDataset& ds, const Eigen::VectorXd& w,
                               const Eigen::VectorXd& margin, const FitConfig& cfg) {
    const auto m = static_cast<double>(ds.rows());
    Eigen::VectorXd d(ds.rows());
    for (Eigen::Index i = 0; i < ds.rows(); ++i) {
        const double s = sigmoid(margin[i]);
        d[i] = w[i] * s * (1.0 - s) / (2.0 * m);
    }
    Eigen::MatrixXd H = ds.X.transpose() * d.asDiagonal() * ds.X;
    const Eigen::Index start = penalty_start(ds);
    for (Eigen::Index j = start; j < H.rows(); ++j) {
        H(j, j) += 2.0 * cfg.lambda2;
    }
    return H;
}

// Minimal-subgradient optimality residual at beta given the smooth gradient.
double optimality_residual(const Eigen::VectorXd& g_smooth, const Eigen::VectorXd& beta,
                           Eigen::Index start, const FitConfig& cfg) {
    if (cfg.lambda1 == 0.0) return g_smooth.norm();
    double sq = 0.0;
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
        double r;
        if (j < start) {
            r = g_smooth[j];
        } else if (beta[j] != 0.0) {
            r = g_smooth[j] + cfg.lambda1 * (beta[j] > 0 ? 1.0 : -1.0);
        } else {
            r = std::max(std::abs(g_smooth[j]) - cfg.lambda1, 0.0);
        }
        sq += r * r;
    }
    return std::sqrt(sq);
}

// Coordinate descent on the penalized quadratic model
//   q(z) = g^T (z - beta) + 0.5 (z - beta)^T H (z - beta) + lambda1 ||z'||_1.
Eigen::VectorXd solve_quadratic_l1(const Eigen::MatrixXd& H, const Eigen::VectorXd& g,
                                   const Eigen::VectorXd& beta, Eigen::Index start,
                                   double lambda1) {
    const Eigen::Index d = beta.size();
    Eigen::VectorXd z = beta;
    Eigen::VectorXd grad_q = g;  // g + H (z - beta), updated incrementally
    for (int sweep = 0; sweep < 100; ++sweep) {
        double max_change = 0.0;
        for (Eigen::Index j = 0; j < d; ++j) {
            const double hjj = std::max(H(j, j), 1e-12);
            double zj_new;
            const double u = z[j] - grad_q[j] / hjj;
            if (j < start) {
                zj_new = u;
            } else {
                const double thr = lambda1 / hjj;
                zj_new = (u > thr) ? u - thr : (u < -thr ? u + thr : 0.0);
            }
            const double delta = zj_new - z[j];
            if (delta != 0.0) {
                grad_q += delta * H.col(j);
                z[j] = zj_new;
                max_change = std::max(max_change, std::abs(delta));
            }
        }
        if (max_change < 1e-12) break;
    }
    return z;
}

}  // namespace

double objective_value(const LabeledDataset& ds, const Eigen::VectorXd& weights,
                       const Eigen::VectorXd& beta, const FitConfig& cfg) {
    Eigen::VectorXd margin;
    kernels::margins(ds.X, beta, margin);
    const double loss = kernels::weighted_logloss(margin, ds.y, weights) /
                        (2.0 * static_cast<double>(ds.rows()));
    return loss + penalty_value(beta, penalty_start(ds), cfg);
}

Eigen::VectorXd objective_gradient(const LabeledDataset& ds,
                                   const Eigen::VectorXd& weights,
                                   const Eigen::VectorXd& beta, const FitConfig& cfg) {
    Eigen::VectorXd margin;
    kernels::margins(ds.X, beta, margin);
    const auto m = static_cast<double>(ds.rows());
    Eigen::VectorXd r(ds.rows());
    for (Eigen::Index i = 0; i < ds.rows(); ++i) {
        const double yi = static_cast<double>(ds.y[i]);
        r[i] = -weights[i] * yi * sigmoid(-yi * margin[i]) / (2.0 * m);
    }
    Eigen::VectorXd g = ds.X.transpose() * r;
    const Eigen::Index start = penalty_start(ds);
    g.tail(g.size() - start) += 2.0 * cfg.lambda2 * beta.tail(beta.size() - start);
    return g;
}

FitResult fit_weighted(const LabeledDataset& ds, const Eigen::VectorXd& weights,
                       const FitConfig& cfg) {
    check_fit_inputs(ds, weights);
    const Eigen::Index d = ds.cols();
    const Eigen::Index start = penalty_start(ds);

    FitResult res;
    res.beta = Eigen::VectorXd::Zero(d);
    double obj = objective_value(ds, weights, res.beta, cfg);

    for (int iter = 0; iter < cfg.max_iter; ++iter) {
        Eigen::VectorXd margin;
        kernels::margins(ds.X, res.beta, margin);
        const Eigen::VectorXd g = objective_gradient(ds, weights, res.beta, cfg);
        res.grad_norm = optimality_residual(g, res.beta, start, cfg);
        if (res.grad_norm <= cfg.tol) {
            res.converged = true;
            break;
        }

        const Eigen::MatrixXd H = smooth_hessian(ds, weights, margin, cfg);
        Eigen::VectorXd direction;
        if (cfg.lambda1 == 0.0) {
            Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
            direction = ldlt.solve(-g);
            if (ldlt.info() != Eigen::Success || !direction.allFinite() ||
                g.dot(direction) >= 0.0) {
                direction = -g;  // gradient fallback on a bad Newton system
            }
        } else {
            direction = solve_quadratic_l1(H, g, res.beta, start, cfg.lambda1) - res.beta;
            if (!direction.allFinite() || direction.isZero(0.0)) {
                res.converged = res.grad_norm <= cfg.tol;
                res.iterations = iter + 1;
                break;
            }
        }

        // Backtracking line search; step 1 is almost always accepted.
        double step = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            const Eigen::VectorXd candidate = res.beta + step * direction;
            const double cand_obj = objective_value(ds, weights, candidate, cfg);
            if (!std::isfinite(cand_obj)) {
                throw NumericalError("fit_weighted: non-finite objective");
            }
            if (cand_obj <= obj + 1e-12 * std::abs(obj)) {
                res.beta = candidate;
                obj = cand_obj;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        res.iterations = iter + 1;
        if (!accepted) break;  // no descent at machine precision
    }

    res.objective = obj;
    const Eigen::VectorXd g_final = objective_gradient(ds, weights, res.beta, cfg);
    res.grad_norm = optimality_residual(g_final, res.beta, start, cfg);
    if (res.grad_norm <= cfg.tol) res.converged = true;
    return res;
}

Eigen::VectorXd predict_proba(const Eigen::VectorXd& beta, const Eigen::MatrixXd& X) {
    if (beta.size() != X.cols()) {
        throw DataError("predict_proba: dimension mismatch");
    }
    Eigen::VectorXd margin;
    kernels::margins(X, beta, margin);
    Eigen::VectorXd p(margin.size());
    for (Eigen::Index i = 0; i < margin.size(); ++i) {
        p[i] = sigmoid(margin[i]);
    }
    return p;
}

double nll(const Eigen::VectorXd& beta, const LabeledDataset& ds) {
    if (beta.size() != ds.cols()) {
        throw DataError("nll: dimension mismatch");
    }
    Eigen::VectorXd margin;
    kernels::margins(ds.X, beta, margin);
    return kernels::weighted_logloss(margin, ds.y, Eigen::VectorXd::Ones(ds.rows()));
}

double roc_auc(const Eigen::VectorXd& scores, const Eigen::VectorXi& y) {
    const Eigen::Index n = scores.size();
    if (y.size() != n) {
        throw DataError("roc_auc: length mismatch");
    }
    Eigen::Index n_pos = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (y[i] == 1) ++n_pos;
    }
    const Eigen::Index n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) {
        throw DataError("roc_auc: both classes required");
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return scores[a] < scores[b];
    });

    // Midrank sum over positives.
    double rank_sum_pos = 0.0;
    Eigen::Index i = 0;
    while (i < n) {
        Eigen::Index j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double midrank = 0.5 * static_cast<double>(i + 1 + j);  // average of ranks i+1..j
        for (Eigen::Index k = i; k < j; ++k) {
            if (y[order[k]] == 1) rank_sum_pos += midrank;
        }
        i = j;
    }
    const double np = static_cast<double>(n_pos);
    const double nn = static_cast<double>(n_neg);
    return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

}  // namespace coreset
