#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "nsforge/datagen.hpp"
#include "nsforge/synthesis.hpp"

namespace nsforge {

/// Everything a run needs; round-trips through JSON bit-exactly and is
/// embedded (resolved) in every output directory.
struct ExperimentConfig {
    GridSpec grid;

    std::string data_kind = "gaussian_vortex";
    DataParams data;

    std::string profile_source = "builtin";  // "builtin" or a slice-stack path
    double profile_half_width = 1.0;
    double profile_time_extent = 0.25;
    int profile_time_samples = 33;

    TimeGrid timegrid = TimeGrid::geometric(64.0, 1e-3, 1.2);
    PicardConfig picard;
    std::string integrator = "picard";  // "picard" | "etd2"

    SynthesisOptions synthesis;
    bool auto_R = true;
    int lambda = 1;

    std::vector<std::string> diagnostics{"decay", "ms", "fm_profile", "lemma_heat2", "wiegner"};
    std::string output_dir = "out";
    std::string calibration_path;  // empty -> shipped defaults

    nlohmann::json to_json() const;
    static ExperimentConfig from_json(const nlohmann::json& j);
    static ExperimentConfig load(const std::string& path);
    void save(const std::string& path) const;

    /// Apply a dotted-path override, e.g. "data.amplitude=0.05".
    static void apply_override(nlohmann::json& j, const std::string& keyval);
};

}  // namespace nsforge
