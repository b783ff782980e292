#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <set>

#include "coreset/bench.hpp"
#include "coreset/config.hpp"
#include "coreset/errors.hpp"

using namespace coreset;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& suffix, const std::string& contents = "") {
        path = std::string(std::tmpnam(nullptr)) + suffix;
        if (!contents.empty()) {
            std::ofstream out(path);
            out << contents;
        }
    }
    ~TempFile() { std::remove(path.c_str()); }
};

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    DatasetSpec ds;
    ds.name = "syn_small";
    ds.synthetic.n = 1200;
    ds.synthetic.d = 3;
    ds.synthetic.seed = 5;
    cfg.datasets = {ds};
    SamplerConfig uni;
    uni.method = Method::uniform;
    SamplerConfig lev;
    lev.method = Method::leverage;
    cfg.methods = {uni, lev};
    cfg.size_lo = 50;
    cfg.size_hi = 200;
    cfg.size_count = 3;
    cfg.replications = 4;
    cfg.record_timing = false;
    return cfg;
}

}  // namespace

TEST_CASE("size_grid fixtures") {
    const auto g = size_grid(200, 100000, 25, 1000000);
    REQUIRE(g.size() == 25);
    CHECK(g.front() == 200);
    CHECK(g.back() == 100000);
    const double ratio = std::pow(500.0, 1.0 / 24.0);
    CHECK(g[1] == static_cast<Eigen::Index>(std::llround(200.0 * ratio)));
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);

    // Duplicates from rounding collapse.
    const auto tight = size_grid(10, 12, 10, 100);
    CHECK(tight.size() == 3);
    CHECK(tight == std::vector<Eigen::Index>({10, 11, 12}));

    // Sizes beyond n_train are dropped.
    const auto capped = size_grid(200, 100000, 25, 5000);
    CHECK(capped.back() <= 5000);
    CHECK(capped.size() < 25);

    const auto single = size_grid(100, 100, 2, 1000);
    CHECK(single == std::vector<Eigen::Index>({100}));

    CHECK_THROWS_AS(size_grid(200, 100, 5, 1000), ConfigError);
    CHECK_THROWS_AS(size_grid(200, 400, 1, 1000), ConfigError);
    CHECK_THROWS_AS(size_grid(5000, 9000, 3, 1000), ConfigError);  // empty after filter
}

TEST_CASE("aggregate computes linear-interpolation quartiles") {
    std::vector<ResultRecord> recs;
    for (int rep = 0; rep < 5; ++rep) {
        ResultRecord r;
        r.dataset = "d";
        r.method = "uniform";
        r.size = 100;
        r.rep = rep;
        MetricSet m;
        m.rel_nll_error = static_cast<double>(rep + 1);  // 1..5
        m.coef_mse = 10.0;
        m.rel_roc = 1.0;
        r.metrics = m;
        recs.push_back(r);
    }
    // One failed record must be skipped, not counted.
    ResultRecord bad;
    bad.dataset = "d";
    bad.method = "uniform";
    bad.size = 100;
    bad.rep = 5;
    bad.error = "synthetic failure";
    recs.push_back(bad);

    const auto agg = aggregate(recs);
    REQUIRE(agg.size() == 3);  // three metrics, no support_acc
    for (const auto& a : agg) {
        CHECK(a.n_ok == 5);
        if (a.metric == "rel_nll_error") {
            CHECK(a.median == doctest::Approx(3.0));
            CHECK(a.q25 == doctest::Approx(2.0));
            CHECK(a.q75 == doctest::Approx(4.0));
        } else if (a.metric == "coef_mse") {
            CHECK(a.median == doctest::Approx(10.0));
        } else {
            CHECK(a.metric == "rel_roc");
            CHECK(a.median == doctest::Approx(1.0));
        }
    }
}

TEST_CASE("aggregate quartiles interpolate on even counts") {
    std::vector<ResultRecord> recs;
    for (int rep = 0; rep < 4; ++rep) {
        ResultRecord r;
        r.dataset = "d";
        r.method = "m";
        r.size = 10;
        r.rep = rep;
        MetricSet ms;
        ms.rel_nll_error = static_cast<double>(rep + 1);  // 1..4
        r.metrics = ms;
        recs.push_back(r);
    }
    const auto agg = aggregate(recs);
    for (const auto& a : agg) {
        if (a.metric != "rel_nll_error") continue;
        CHECK(a.median == doctest::Approx(2.5));
        CHECK(a.q25 == doctest::Approx(1.75));
        CHECK(a.q75 == doctest::Approx(3.25));
    }
}

TEST_CASE("run_experiment produces the full grid in canonical order") {
    const ExperimentConfig cfg = small_config();
    const auto recs = run_experiment(cfg);
    const auto grid = size_grid(cfg.size_lo, cfg.size_hi, cfg.size_count, 1140);
    REQUIRE(recs.size() == cfg.methods.size() * grid.size() *
                               static_cast<std::size_t>(cfg.replications));
    std::size_t i = 0;
    for (const auto& m : cfg.methods) {
        for (const auto s : grid) {
            for (int rep = 0; rep < cfg.replications; ++rep, ++i) {
                CHECK(recs[i].dataset == "syn_small");
                CHECK(recs[i].method == method_name(m.method));
                CHECK(recs[i].size == s);
                CHECK(recs[i].rep == rep);
                REQUIRE(recs[i].metrics.has_value());
                CHECK(recs[i].error.empty());
                CHECK(recs[i].wall_time_ms == 0.0);
            }
        }
    }
}

TEST_CASE("run_experiment is deterministic and thread-count independent") {
    ExperimentConfig cfg = small_config();
    cfg.parallelism = 1;
    const auto a = run_experiment(cfg);
    cfg.parallelism = 4;
    const auto b = run_experiment(cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i].metrics.has_value());
        REQUIRE(b[i].metrics.has_value());
        CHECK(a[i].metrics->rel_nll_error == b[i].metrics->rel_nll_error);
        CHECK(a[i].metrics->coef_mse == b[i].metrics->coef_mse);
        CHECK(a[i].metrics->rel_roc == b[i].metrics->rel_roc);
    }

    // Different base seed changes the draws.
    cfg.base_seed = 99;
    const auto c = run_experiment(cfg);
    bool any_diff = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].metrics->coef_mse != c[i].metrics->coef_mse) any_diff = true;
    }
    CHECK(any_diff);
}

TEST_CASE("identity_mode reports perfect metrics") {
    ExperimentConfig cfg = small_config();
    cfg.identity_mode = true;
    cfg.replications = 2;
    for (const auto& r : run_experiment(cfg)) {
        REQUIRE(r.metrics.has_value());
        CHECK(r.metrics->rel_nll_error == 0.0);
        CHECK(r.metrics->coef_mse == 0.0);
        CHECK(r.metrics->rel_roc == 1.0);
    }
}

TEST_CASE("l1_mode populates support accuracy") {
    ExperimentConfig cfg = small_config();
    cfg.l1_mode = true;
    cfg.fit.lambda1 = 0.01;
    cfg.replications = 2;
    cfg.size_count = 2;
    const auto recs = run_experiment(cfg);
    for (const auto& r : recs) {
        REQUIRE(r.metrics.has_value());
        REQUIRE(r.metrics->support_accuracy.has_value());
        CHECK(*r.metrics->support_accuracy >= 0.0);
        CHECK(*r.metrics->support_accuracy <= 1.0);
    }
    const auto agg = aggregate(recs);
    std::set<std::string> metrics;
    for (const auto& a : agg) metrics.insert(a.metric);
    CHECK(metrics.count("support_acc") == 1);
}

TEST_CASE("prepared round trip preserves the data exactly") {
    const LabeledDataset ds =
        add_intercept(synthesize_logistic(40, 3, Eigen::VectorXd::Ones(3), 9));
    TempFile f(".csv");
    write_prepared(ds, f.path);
    // The file stores only the feature columns; the reader leaves the
    // intercept to the caller.
    const LabeledDataset back = read_prepared(f.path, "roundtrip");
    CHECK_FALSE(back.has_intercept);
    CHECK(back.name == "roundtrip");
    REQUIRE(back.rows() == 40);
    REQUIRE(back.cols() == 3);
    CHECK((back.X - ds.X.rightCols(3)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(back.y == ds.y);
}

TEST_CASE("results CSV round trip") {
    ExperimentConfig cfg = small_config();
    cfg.replications = 2;
    const auto recs = run_experiment(cfg);
    TempFile f(".csv");
    write_results_csv(recs, f.path);

    std::ifstream in(f.path);
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "dataset,method,size,rep,rel_nll_error,coef_mse,rel_roc,support_acc,"
          "wall_time_ms,fallback_used,error");

    const auto back = read_results_csv(f.path);
    REQUIRE(back.size() == recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
        CHECK(back[i].dataset == recs[i].dataset);
        CHECK(back[i].method == recs[i].method);
        CHECK(back[i].size == recs[i].size);
        CHECK(back[i].rep == recs[i].rep);
        CHECK(back[i].metrics->rel_nll_error == recs[i].metrics->rel_nll_error);
        CHECK(back[i].metrics->coef_mse == recs[i].metrics->coef_mse);
        CHECK(back[i].metrics->rel_roc == recs[i].metrics->rel_roc);
    }
}

TEST_CASE("compare_report family sizes with seven methods") {
    // Fabricate aggregates: 7 methods x 4 (dataset,size) cells x 3 metrics.
    const std::vector<std::string> methods = {"uniform",  "kmeans", "leverage",
                                              "monotonic", "lewis",  "osmac_vc",
                                              "osmac_mse"};
    std::vector<AggregateRecord> agg;
    int salt = 0;
    for (const auto& metric : {"rel_nll_error", "coef_mse", "rel_roc"}) {
        for (const auto& m : methods) {
            for (int cell = 0; cell < 4; ++cell) {
                AggregateRecord a;
                a.dataset = "d" + std::to_string(cell / 2);
                a.size = 100 * (1 + cell % 2);
                a.method = m;
                a.metric = metric;
                a.median = static_cast<double>(++salt % 13);
                a.n_ok = 5;
                agg.push_back(a);
            }
        }
    }
    const auto vs = compare_report(agg, ComparisonFamily::vs_uniform);
    CHECK(vs.size() == 6 * 3);
    for (const auto& row : vs) {
        CHECK((row.method_a == "uniform" || row.method_b == "uniform"));
        CHECK(row.p_corrected <= 1.0);
        CHECK(row.p_corrected >= 0.0);
    }
    const auto all = compare_report(agg, ComparisonFamily::all_pairs);
    CHECK(all.size() == 15 * 3);
    for (const auto& row : all) {
        CHECK(row.method_a != "uniform");
        CHECK(row.method_b != "uniform");
    }
}

TEST_CASE("load_config parses and validates") {
    TempFile cfgfile(".json", R"({
      "base_seed": 7,
      "replications": 3,
      "grid": {"lo": 100, "hi": 400, "count": 4},
      "fit": {"lambda2": 0.001},
      "record_timing": false,
      "datasets": [{"name": "s", "type": "synthetic", "n": 500, "d": 2, "seed": 1}],
      "methods": [{"method": "uniform"}, {"method": "lewis", "t": 9}]
    })");
    const ExperimentConfig cfg = load_config(cfgfile.path);
    CHECK(cfg.base_seed == 7);
    CHECK(cfg.replications == 3);
    CHECK(cfg.size_lo == 100);
    CHECK(cfg.size_hi == 400);
    CHECK(cfg.size_count == 4);
    CHECK(cfg.fit.lambda2 == doctest::Approx(0.001));
    CHECK_FALSE(cfg.record_timing);
    REQUIRE(cfg.datasets.size() == 1);
    CHECK(cfg.datasets[0].synthetic.n == 500);
    REQUIRE(cfg.methods.size() == 2);
    CHECK(cfg.methods[1].method == Method::lewis);
    CHECK(cfg.methods[1].lewis_t == 9);

    TempFile typo(".json", R"({
      "replciations": 3,
      "datasets": [{"name": "s"}],
      "methods": [{"method": "uniform"}]
    })");
    CHECK_THROWS_AS(load_config(typo.path), ConfigError);

    TempFile l1bad(".json", R"({
      "l1_mode": true,
      "datasets": [{"name": "s"}],
      "methods": [{"method": "uniform"}]
    })");
    CHECK_THROWS_AS(load_config(l1bad.path), ConfigError);
}

TEST_CASE("config_digest is whitespace-insensitive but value-sensitive") {
    TempFile a(".json", R"({"base_seed": 1, "replications": 2})");
    TempFile b(".json", "{\n  \"replications\": 2,\n  \"base_seed\": 1\n}\n");
    TempFile c(".json", R"({"base_seed": 2, "replications": 2})");
    CHECK(config_digest(a.path) == config_digest(b.path));
    CHECK(config_digest(a.path) != config_digest(c.path));
}
