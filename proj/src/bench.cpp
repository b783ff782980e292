#include "coreset/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>

#include "coreset/csv.hpp"
#include "coreset/errors.hpp"
#include "coreset/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace coreset {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double quantile(std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    const double h = (static_cast<double>(v.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = static_cast<std::size_t>(std::ceil(h));
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

SplitDataset load_dataset(const DatasetSpec& spec) {
    switch (spec.kind) {
        case DatasetSpec::Kind::synthetic: {
            const auto& syn = spec.synthetic;
            Eigen::VectorXd beta(syn.d);
            if (syn.beta_true.empty()) {
                beta.setOnes();
            } else if (static_cast<Eigen::Index>(syn.beta_true.size()) == syn.d) {
                for (Eigen::Index j = 0; j < syn.d; ++j) {
                    beta[j] = syn.beta_true[static_cast<std::size_t>(j)];
                }
            } else {
                throw ConfigError(spec.name + ": beta_true length must equal d");
            }
            LabeledDataset full = synthesize_logistic(syn.n, syn.d, beta, syn.seed);
            full.name = spec.name;

            std::vector<Eigen::Index> order(static_cast<std::size_t>(syn.n));
            std::iota(order.begin(), order.end(), Eigen::Index{0});
            Rng rng(mix64(syn.seed ^ 0x7e57da7aULL));
            for (std::size_t i = order.size() - 1; i > 0; --i) {
                std::size_t j = rng.next_index(i + 1);
                std::swap(order[i], order[j]);
            }
            const auto n_test = static_cast<std::size_t>(
                std::ceil(syn.test_fraction * static_cast<double>(syn.n)));
            std::vector<Eigen::Index> test_rows(order.begin(), order.begin() + n_test);
            std::vector<Eigen::Index> train_rows(order.begin() + n_test, order.end());
            std::sort(test_rows.begin(), test_rows.end());
            std::sort(train_rows.begin(), train_rows.end());
            SplitDataset split;
            split.train = add_intercept(full.subset(train_rows));
            split.test = add_intercept(full.subset(test_rows));
            return split;
        }
        case DatasetSpec::Kind::csv: {
            SplitDataset split = load_csv(spec.path, spec.preprocess, spec.synthetic.seed);
            split.train.name = spec.name;
            split.test.name = spec.name;
            return split;
        }
        case DatasetSpec::Kind::prepared: {
            SplitDataset split;
            split.train = add_intercept(read_prepared(spec.train_path, spec.name));
            split.test = add_intercept(read_prepared(spec.test_path, spec.name));
            if (split.train.cols() != split.test.cols()) {
                throw DataError(spec.name + ": train/test column mismatch");
            }
            return split;
        }
    }
    throw ConfigError("unknown dataset kind");
}

void write_prepared(const LabeledDataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write " + path);
    }
    const Eigen::Index skip = ds.has_intercept ? 1 : 0;
    const Eigen::Index d = ds.cols() - skip;
    for (Eigen::Index j = 0; j < d; ++j) {
        out << 'f' << j << ',';
    }
    out << "label\n";
    for (Eigen::Index i = 0; i < ds.rows(); ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            out << fmt_double(ds.X(i, j + skip)) << ',';
        }
        out << ds.y[i] << '\n';
    }
}

LabeledDataset read_prepared(const std::string& path, const std::string& name) {
    CsvTable table = read_csv(path);
    if (table.header.empty() || table.header.back() != "label") {
        throw DataError(path + ": last column must be 'label'");
    }
    const auto n = static_cast<Eigen::Index>(table.rows.size());
    const auto d = static_cast<Eigen::Index>(table.header.size()) - 1;
    LabeledDataset ds;
    ds.X.resize(n, d);
    ds.y.resize(n);
    ds.name = name;
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = table.rows[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < d; ++j) {
            ds.X(i, j) = std::stod(row[static_cast<std::size_t>(j)]);
        }
        ds.y[i] = std::stoi(row[static_cast<std::size_t>(d)]);
    }
    ds.validate();
    return ds;
}

std::vector<Eigen::Index> size_grid(Eigen::Index lo, Eigen::Index hi, int count,
                                    Eigen::Index n_train) {
    if (lo < 1 || hi < lo || count < 2) {
        throw ConfigError("size_grid: need 1 <= lo <= hi and count >= 2");
    }
    std::vector<Eigen::Index> sizes;
    const double ratio = static_cast<double>(hi) / static_cast<double>(lo);
    for (int i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(count - 1);
        const auto s = static_cast<Eigen::Index>(
            std::llround(static_cast<double>(lo) * std::pow(ratio, t)));
        if (s > n_train) continue;
        if (sizes.empty() || sizes.back() != s) sizes.push_back(s);
    }
    if (sizes.empty()) {
        throw ConfigError("size_grid: no sizes <= n_train = " + std::to_string(n_train));
    }
    return sizes;
}

std::vector<ResultRecord> run_experiment(const ExperimentConfig& cfg) {
    if (cfg.datasets.empty() || cfg.methods.empty()) {
        throw ConfigError("run_experiment: datasets and methods must be nonempty");
    }
    if (cfg.replications < 1) {
        throw ConfigError("run_experiment: replications must be >= 1");
    }

    struct PreparedDataset {
        SplitDataset split;
        Eigen::VectorXd beta_full;
        std::vector<Eigen::Index> sizes;
        // Cached score vectors for methods without a random component.
        std::vector<std::optional<ScoreVector>> cached_scores;
    };

    std::vector<PreparedDataset> prepared;
    prepared.reserve(cfg.datasets.size());
    for (const auto& dspec : cfg.datasets) {
        PreparedDataset pd;
        pd.split = load_dataset(dspec);
        const Eigen::VectorXd ones = Eigen::VectorXd::Ones(pd.split.train.rows());
        const FitResult full_fit = fit_weighted(pd.split.train, ones, cfg.fit);
        pd.beta_full = full_fit.beta;
        pd.sizes = size_grid(cfg.size_lo, cfg.size_hi, cfg.size_count,
                             pd.split.train.rows());

        pd.cached_scores.resize(cfg.methods.size());
        for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
            SamplerConfig scfg = cfg.methods[mi];
            if (method_is_randomized(scfg.method)) continue;
            if (scfg.method == Method::monotonic) {
                scfg.lambda_for_monotonic = cfg.fit.lambda2;
            }
            const std::uint64_t seed =
                derive_seed(cfg.base_seed, dspec.name, method_name(scfg.method), 0, 0);
            pd.cached_scores[mi] =
                compute_scores(pd.split.train, scfg, 0, seed, cfg.fit).scores;
        }
        prepared.push_back(std::move(pd));
    }

    struct Cell {
        std::size_t ds_i;
        std::size_t m_i;
        Eigen::Index size;
        int rep;
    };
    std::vector<Cell> cells;
    for (std::size_t di = 0; di < prepared.size(); ++di) {
        for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
            for (Eigen::Index size : prepared[di].sizes) {
                for (int rep = 0; rep < cfg.replications; ++rep) {
                    cells.push_back({di, mi, size, rep});
                }
            }
        }
    }

    std::vector<ResultRecord> records(cells.size());
    const auto n_cells = static_cast<std::int64_t>(cells.size());

#ifdef _OPENMP
    const int threads = std::max(1, cfg.parallelism);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
    for (std::int64_t ci = 0; ci < n_cells; ++ci) {
        const Cell& cell = cells[static_cast<std::size_t>(ci)];
        const PreparedDataset& pd = prepared[cell.ds_i];
        SamplerConfig scfg = cfg.methods[cell.m_i];
        scfg.osmac_fallback = true;  // the benchmark must not abort on singular M_X
        if (scfg.method == Method::monotonic) {
            scfg.lambda_for_monotonic = cfg.fit.lambda2;
        }
        const std::string& ds_name = cfg.datasets[cell.ds_i].name;

        ResultRecord rec;
        rec.dataset = ds_name;
        rec.method = method_name(scfg.method);
        rec.size = cell.size;
        rec.rep = cell.rep;

        const auto t0 = std::chrono::steady_clock::now();
        try {
            const std::uint64_t cell_seed =
                derive_seed(cfg.base_seed, ds_name, rec.method, cell.size, cell.rep);

            Eigen::VectorXd beta_c;
            if (cfg.identity_mode) {
                beta_c = pd.beta_full;
            } else {
                ScoreVector scores;
                if (pd.cached_scores[cell.m_i].has_value()) {
                    scores = *pd.cached_scores[cell.m_i];
                } else {
                    auto outcome =
                        compute_scores(pd.split.train, scfg, cell.size, cell_seed, cfg.fit);
                    scores = std::move(outcome.scores);
                    rec.fallback_used = outcome.fallback_used;
                }
                const std::uint64_t draw_seed = mix64(cell_seed ^ 0xd9a4c0de5eedULL);
                const CoresetSample cs = sample_coreset(scores, cell.size, draw_seed);
                const LabeledDataset sub = pd.split.train.subset(cs.indices);
                const FitResult fit = fit_weighted(sub, cs.weights, cfg.fit);
                beta_c = fit.beta;
            }

            MetricSet ms;
            ms.rel_nll_error = relative_nll_error(beta_c, pd.beta_full, pd.split.train);
            ms.coef_mse = coefficient_mse(beta_c, pd.beta_full);
            ms.rel_roc = relative_roc(beta_c, pd.beta_full, pd.split.test);
            if (cfg.l1_mode) {
                ms.support_accuracy = support_accuracy(beta_c, pd.beta_full,
                                                       pd.split.train.has_intercept);
            }
            rec.metrics = ms;
        } catch (const std::exception& e) {
            rec.error = e.what();
        }
        const auto t1 = std::chrono::steady_clock::now();
        rec.wall_time_ms =
            cfg.record_timing
                ? std::chrono::duration<double, std::milli>(t1 - t0).count()
                : 0.0;
        records[static_cast<std::size_t>(ci)] = std::move(rec);
    }
    return records;
}

std::vector<AggregateRecord> aggregate(const std::vector<ResultRecord>& records) {
    if (records.empty()) {
        throw ConfigError("aggregate: no records");
    }
    struct CellKey {
        std::string dataset, method;
        Eigen::Index size;
        bool operator<(const CellKey& o) const {
            return std::tie(dataset, method, size) < std::tie(o.dataset, o.method, o.size);
        }
    };
    // First-appearance order keeps aggregates aligned with the results file.
    std::vector<CellKey> order;
    std::map<CellKey, std::vector<const ResultRecord*>> cells;
    for (const auto& r : records) {
        CellKey key{r.dataset, r.method, r.size};
        auto [it, inserted] = cells.try_emplace(key);
        if (inserted) order.push_back(key);
        it->second.push_back(&r);
    }

    std::vector<AggregateRecord> out;
    for (const auto& key : order) {
        const auto& recs = cells.at(key);
        const bool have_support =
            std::any_of(recs.begin(), recs.end(), [](const ResultRecord* r) {
                return r->metrics && r->metrics->support_accuracy.has_value();
            });
        std::vector<std::pair<std::string, std::vector<double>>> metric_values;
        metric_values.emplace_back("rel_nll_error", std::vector<double>{});
        metric_values.emplace_back("coef_mse", std::vector<double>{});
        metric_values.emplace_back("rel_roc", std::vector<double>{});
        if (have_support) metric_values.emplace_back("support_acc", std::vector<double>{});
        for (const ResultRecord* r : recs) {
            if (!r->metrics) continue;
            metric_values[0].second.push_back(r->metrics->rel_nll_error);
            metric_values[1].second.push_back(r->metrics->coef_mse);
            metric_values[2].second.push_back(r->metrics->rel_roc);
            if (have_support && r->metrics->support_accuracy) {
                metric_values[3].second.push_back(*r->metrics->support_accuracy);
            }
        }
        for (const auto& [metric, values] : metric_values) {
            AggregateRecord agg;
            agg.dataset = key.dataset;
            agg.method = key.method;
            agg.size = key.size;
            agg.metric = metric;
            agg.n_ok = static_cast<int>(values.size());
            if (!values.empty()) {
                agg.median = quantile(values, 0.5);
                agg.q25 = quantile(values, 0.25);
                agg.q75 = quantile(values, 0.75);
            }
            out.push_back(std::move(agg));
        }
    }
    return out;
}

std::vector<ComparisonRow> compare_report(const std::vector<AggregateRecord>& aggregates,
                                          ComparisonFamily family) {
    // metric -> method -> per-(dataset,size) medians.
    std::map<std::string, std::map<std::string, std::vector<double>>> by_metric;
    for (const auto& a : aggregates) {
        if (a.n_ok == 0) continue;
        by_metric[a.metric][a.method].push_back(a.median);
    }

    std::vector<ComparisonRow> out;
    const std::vector<std::string> metric_order = {"rel_nll_error", "coef_mse", "rel_roc",
                                                   "support_acc"};
    for (const auto& metric : metric_order) {
        auto it = by_metric.find(metric);
        if (it == by_metric.end()) continue;
        const auto& obs = it->second;
        if (obs.size() < 2) continue;

        const bool have_uniform = obs.count("uniform") > 0;
        auto in_family = [&](const std::string& a, const std::string& b) {
            if (family == ComparisonFamily::vs_uniform) {
                return a == "uniform" || b == "uniform";
            }
            // all_pairs: pairwise among the non-uniform methods when the
            // uniform baseline is present.
            if (have_uniform) return a != "uniform" && b != "uniform";
            return true;
        };

        int family_size = 0;
        std::vector<std::string> names;
        for (const auto& [name, values] : obs) names.push_back(name);
        for (std::size_t a = 0; a < names.size(); ++a) {
            for (std::size_t b = a + 1; b < names.size(); ++b) {
                if (in_family(names[a], names[b])) ++family_size;
            }
        }
        if (family_size == 0) continue;

        const DunnReport report = kruskal_dunn(obs, family_size);
        for (const auto& cmp : report.pairs) {
            if (!in_family(cmp.method_a, cmp.method_b)) continue;
            ComparisonRow row;
            row.metric = metric;
            row.method_a = cmp.method_a;
            row.method_b = cmp.method_b;
            row.z = cmp.z;
            row.p_corrected = cmp.p_corrected;
            out.push_back(std::move(row));
        }
    }
    return out;
}

void write_results_csv(const std::vector<ResultRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write " + path);
    }
    out << "dataset,method,size,rep,rel_nll_error,coef_mse,rel_roc,support_acc,"
           "wall_time_ms,fallback_used,error\n";
    for (const auto& r : records) {
        out << r.dataset << ',' << r.method << ',' << r.size << ',' << r.rep << ',';
        if (r.metrics) {
            out << fmt_double(r.metrics->rel_nll_error) << ','
                << fmt_double(r.metrics->coef_mse) << ','
                << fmt_double(r.metrics->rel_roc) << ',';
            if (r.metrics->support_accuracy) {
                out << fmt_double(*r.metrics->support_accuracy);
            }
        } else {
            out << ",,,";
        }
        out << ',' << fmt_double(r.wall_time_ms) << ',' << (r.fallback_used ? 1 : 0) << ',';
        std::string err = r.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::replace(err.begin(), err.end(), '\n', ' ');
        out << err << '\n';
    }
}

std::vector<ResultRecord> read_results_csv(const std::string& path) {
    CsvTable table = read_csv(path);
    const std::vector<std::string> expected = {
        "dataset", "method", "size", "rep", "rel_nll_error", "coef_mse", "rel_roc",
        "support_acc", "wall_time_ms", "fallback_used", "error"};
    if (table.header != expected) {
        throw ConfigError(path + ": results CSV header does not match the schema");
    }
    std::vector<ResultRecord> out;
    out.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        ResultRecord r;
        r.dataset = row[0];
        r.method = row[1];
        r.size = std::stol(row[2]);
        r.rep = std::stoi(row[3]);
        if (!row[4].empty()) {
            MetricSet ms;
            ms.rel_nll_error = std::stod(row[4]);
            ms.coef_mse = std::stod(row[5]);
            ms.rel_roc = std::stod(row[6]);
            if (!row[7].empty()) ms.support_accuracy = std::stod(row[7]);
            r.metrics = ms;
        }
        r.wall_time_ms = std::stod(row[8]);
        r.fallback_used = row[9] == "1";
        r.error = row[10];
        out.push_back(std::move(r));
    }
    return out;
}

void write_aggregates_csv(const std::vector<AggregateRecord>& aggregates,
                          const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write " + path);
    }
    out << "dataset,method,size,metric,median,q25,q75,n_ok\n";
    for (const auto& a : aggregates) {
        out << a.dataset << ',' << a.method << ',' << a.size << ',' << a.metric << ','
            << fmt_double(a.median) << ',' << fmt_double(a.q25) << ','
            << fmt_double(a.q75) << ',' << a.n_ok << '\n';
    }
}

void write_comparisons_csv(const std::vector<ComparisonRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write " + path);
    }
    out << "metric,method_a,method_b,z,p_corrected\n";
    for (const auto& r : rows) {
        out << r.metric << ',' << r.method_a << ',' << r.method_b << ','
            << fmt_double(r.z) << ',' << fmt_double(r.p_corrected) << '\n';
    }
}

}  // namespace coreset
