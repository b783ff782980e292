#include "coreset/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "coreset/errors.hpp"
#include "coreset/rng.hpp"

namespace coreset {

namespace {

using nlohmann::json;

json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open config: " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) {
            throw ConfigError("unknown key '" + key + "' in " + where);
        }
    }
}

PreprocessSpec parse_preprocess(const json& j) {
    reject_unknown(j, {"numeric", "categorical", "scale_range", "test_fraction",
                       "label", "positive_label", "add_intercept", "separator"},
                   "preprocess");
    PreprocessSpec spec;
    spec.numeric_columns = j.value("numeric", std::vector<std::string>{});
    spec.categorical_columns = j.value("categorical", std::vector<std::string>{});
    if (j.contains("scale_range")) {
        auto r = j.at("scale_range").get<std::vector<double>>();
        if (r.size() != 2) throw ConfigError("scale_range must have two entries");
        spec.scale_range = {r[0], r[1]};
    }
    spec.test_fraction = j.value("test_fraction", 0.05);
    spec.label_column = j.at("label").get<std::string>();
    spec.positive_label = j.at("positive_label").get<std::string>();
    spec.add_intercept_column = j.value("add_intercept", true);
    const std::string sep = j.value("separator", ",");
    if (sep.size() != 1) throw ConfigError("separator must be one character");
    spec.separator = sep[0];
    return spec;
}

DatasetSpec parse_dataset(const json& j) {
    reject_unknown(j, {"name", "type", "n", "d", "seed", "beta_true", "test_fraction",
                       "path", "preprocess", "train", "test"},
                   "dataset");
    DatasetSpec spec;
    spec.name = j.at("name").get<std::string>();
    const std::string type = j.value("type", "synthetic");
    if (type == "synthetic") {
        spec.kind = DatasetSpec::Kind::synthetic;
        spec.synthetic.n = j.value("n", 20000);
        spec.synthetic.d = j.value("d", 10);
        spec.synthetic.seed = j.value("seed", 0ULL);
        spec.synthetic.beta_true = j.value("beta_true", std::vector<double>{});
        spec.synthetic.test_fraction = j.value("test_fraction", 0.05);
    } else if (type == "csv") {
        spec.kind = DatasetSpec::Kind::csv;
        spec.path = j.at("path").get<std::string>();
        spec.preprocess = parse_preprocess(j.at("preprocess"));
        spec.synthetic.seed = j.value("seed", 0ULL);  // split shuffle seed
    } else if (type == "prepared") {
        spec.kind = DatasetSpec::Kind::prepared;
        spec.train_path = j.at("train").get<std::string>();
        spec.test_path = j.at("test").get<std::string>();
    } else {
        throw ConfigError("unknown dataset type: " + type);
    }
    return spec;
}

SamplerConfig parse_method(const json& j) {
    reject_unknown(j, {"method", "k", "R", "cluster_subsample", "t", "pilot_fraction",
                       "binning", "lambda_for_monotonic"},
                   "method");
    SamplerConfig cfg;
    cfg.method = method_from_name(j.at("method").get<std::string>());
    cfg.kmeans_k = j.value("k", 6);
    cfg.kmeans_R = j.value("R", 1.0);
    cfg.kmeans_cluster_subsample = j.value("cluster_subsample", 10000);
    cfg.lewis_t = j.value("t", 5);
    cfg.pilot_fraction = j.value("pilot_fraction", 0.5);
    cfg.leverage_binning = j.value("binning", false);
    cfg.lambda_for_monotonic = j.value("lambda_for_monotonic", 1e-5);
    return cfg;
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
    const json j = parse_file(path);
    reject_unknown(j, {"base_seed", "replications", "grid", "fit", "l1_mode",
                       "identity_mode", "record_timing", "parallelism", "datasets",
                       "methods"},
                   "config root");
    ExperimentConfig cfg;
    cfg.base_seed = j.value("base_seed", 0ULL);
    cfg.replications = j.value("replications", 50);
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        reject_unknown(g, {"lo", "hi", "count"}, "grid");
        cfg.size_lo = g.value("lo", 200);
        cfg.size_hi = g.value("hi", 100000);
        cfg.size_count = g.value("count", 25);
    }
    if (j.contains("fit")) {
        const json& f = j.at("fit");
        reject_unknown(f, {"lambda2", "lambda1", "tol", "max_iter"}, "fit");
        cfg.fit.lambda2 = f.value("lambda2", 1e-5);
        cfg.fit.lambda1 = f.value("lambda1", 0.0);
        cfg.fit.tol = f.value("tol", 1e-8);
        cfg.fit.max_iter = f.value("max_iter", 200);
    }
    cfg.l1_mode = j.value("l1_mode", false);
    cfg.identity_mode = j.value("identity_mode", false);
    cfg.record_timing = j.value("record_timing", true);
    cfg.parallelism = j.value("parallelism", 1);
    for (const json& d : j.at("datasets")) {
        cfg.datasets.push_back(parse_dataset(d));
    }
    for (const json& m : j.at("methods")) {
        cfg.methods.push_back(parse_method(m));
    }
    if (cfg.l1_mode && cfg.fit.lambda1 <= 0.0) {
        throw ConfigError("l1_mode requires fit.lambda1 > 0");
    }
    return cfg;
}

std::string config_digest(const std::string& path) {
    // nlohmann keeps object keys sorted, so dump() is a canonical form.
    const std::string canonical = parse_file(path).dump();
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(canonical)));
    return buf;
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
    json j;
    j["config_digest"] = manifest.config_digest;
    j["results"] = manifest.results_path;
    if (!manifest.aggregates_path.empty()) j["aggregates"] = manifest.aggregates_path;
    if (!manifest.comparisons_path.empty()) j["comparisons"] = manifest.comparisons_path;
    j["tool_version"] = manifest.tool_version;
    j["started_at"] = manifest.started_at;
    j["finished_at"] = manifest.finished_at;
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write manifest: " + path);
    }
    out << j.dump(2) << '\n';
}

}  // namespace coreset
