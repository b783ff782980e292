#pragma once

#include <string>

#include "coreset/bench.hpp"

namespace coreset {

// Parses the JSON experiment config. Unknown keys are rejected so typos in
// option names fail loudly. See configs/example.json for the full surface.
ExperimentConfig load_config(const std::string& path);

// Content hash over the parsed (canonicalized) config; insensitive to
// whitespace and key order, sensitive to every semantic field.
std::string config_digest(const std::string& path);

struct RunManifest {
    std::string config_digest;
    std::string results_path;
    std::string aggregates_path;
    std::string comparisons_path;
    std::string tool_version;
    std::string started_at;
    std::string finished_at;
};

void write_manifest(const RunManifest& manifest, const std::string& path);

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace coreset
