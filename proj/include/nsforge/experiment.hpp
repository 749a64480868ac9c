#pragma once

#include "nsforge/config.hpp"

namespace nsforge {

/// What a run leaves on disk, with content hashes for verification.
struct RunManifest {
    std::string config_hash;
    std::string mode;
    std::vector<std::pair<std::string, std::string>> artifacts;  // relative path -> fnv1a64 hex
    std::string created;
    double wall_clock_seconds = 0.0;
    nlohmann::json counts;

    nlohmann::json to_json() const;
    static RunManifest load(const std::string& path);
    void save(const std::string& path) const;
    bool verify(const std::string& run_dir) const;
};

/// Execute a configured run end to end:
/// generate -> check_smallness -> (choose_R) -> solve/synthesize -> diagnostics.
/// mode is "simulate" (solver only) or "synthesize" (the full outer loop).
RunManifest run_experiment(const ExperimentConfig& cfg, const std::string& mode);

/// Recompute reports (CSV series + summary.json) from a stored run directory.
/// Deterministic, hence idempotent re-export.
void diagnose_run(const std::string& run_dir);

}  // namespace nsforge
