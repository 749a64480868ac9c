#include "nsforge/experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "nsforge/diagnostics.hpp"
#include "nsforge/field_io.hpp"

namespace nsforge {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string hex64(std::uint64_t v) {
    std::ostringstream ss;
    ss << "0x" << std::hex << std::setfill('0') << std::setw(16) << v;
    return ss.str();
}

std::string timestamp_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

json matrix_json(const std::array<std::array<double, 3>, 3>& m, int dim) {
    json rows = json::array();
    for (int k = 0; k < dim; ++k) {
        json row = json::array();
        for (int l = 0; l < dim; ++l) row.push_back(m[k][l]);
        rows.push_back(row);
    }
    return rows;
}

json smallness_json(const SmallnessReport& rep) {
    json entries = json::array();
    for (const auto& e : rep.entries)
        entries.push_back(json{{"name", e.name},
                               {"lhs", e.lhs},
                               {"rhs", e.rhs},
                               {"margin", e.margin},
                               {"pass", e.pass}});
    return json{{"entries", entries}, {"all_pass", rep.all_pass}};
}

void write_series_csv(const std::string& path, const std::string& header,
                      const std::vector<std::array<double, 3>>& rows) {
    std::ofstream out(path);
    out << header << "\n";
    out << std::setprecision(17);
    for (const auto& r : rows) out << r[0] << "," << r[1] << "," << r[2] << "\n";
}

ForceProfile make_profile(const ExperimentConfig& cfg, const Calibration& calib,
                          const VectorField& a, json& synth_info) {
    ProfileBase base;
    if (cfg.profile_source == "builtin") {
        base = ProfileBase::builtin_bump(cfg.profile_half_width, cfg.profile_time_extent,
                                         cfg.profile_time_samples);
    } else {
        SliceStack st = load_slices(cfg.profile_source);
        if (!(st.grid == cfg.grid))
            throw std::runtime_error("profile file grid does not match the experiment grid");
        base = ProfileBase::from_samples(st.grid, st.times, st.slices, st.half_width,
                                         st.time_extent);
    }
    if (cfg.auto_R) {
        ChooseRResult r = choose_R(a, base, calib);
        synth_info["R"] = r.R;
        synth_info["binding_condition"] = r.binding_condition;
        return std::move(r.profile);
    }
    synth_info["R"] = 1.0;
    synth_info["binding_condition"] = "";
    return realize_profile(base, cfg.grid, 1.0);
}

struct DiagnosticsOutput {
    std::vector<std::string> files;
    json summary;
};

// Shared by run_experiment and diagnose_run: everything derives from stored
// artifacts so re-export is byte-identical.
DiagnosticsOutput compute_reports(const std::string& dir, const ExperimentConfig& cfg,
                                  const Calibration& calib) {
    DiagnosticsOutput out;
    const VectorField a = load_field((fs::path(dir) / "a.nsf").string());
    Trajectory tr = load_trajectory((fs::path(dir) / "trajectory").string());
    const GridSpec& g = tr.grid;
    const int n = g.dim;

    json synth;
    {
        std::ifstream in(fs::path(dir) / "synthesis.json");
        if (in) in >> synth;
    }

    json summary;
    summary["format"] = "nsforge-summary";
    summary["mode"] = synth.is_null() ? "simulate" : "synthesize";
    summary["grid"] = {{"dim", g.dim}, {"points", g.points}, {"length", g.length}};
    summary["validity_t_max"] = g.validity_t_max();
    if (!synth.is_null()) summary["synthesis"] = synth;

    const bool zero_field = max_abs(a) == 0.0;
    const double a2 = lp_norm(a, 2.0);
    summary["data"] = {{"kind", cfg.data_kind}, {"l2", a2}, {"max", max_abs(a)}};

    auto has = [&](const std::string& d) {
        for (const auto& s : cfg.diagnostics)
            if (s == d) return true;
        return false;
    };

    const auto& l2 = tr.series(2.0);
    const double cap = g.validity_t_max();

    if (has("decay")) {
        std::vector<std::array<double, 3>> rows;
        std::vector<std::pair<double, double>> series;
        for (std::size_t i = 0; i < tr.size(); ++i) {
            const double t = tr.time(i);
            const double w = t > 0.0 ? std::pow(t, (n + 2) / 4.0) * l2[i] : 0.0;
            rows.push_back({t, l2[i], w});
            if (t > 0.0 && l2[i] > 0.0) series.emplace_back(t, l2[i]);
        }
        const std::string csv = (fs::path(dir) / "decay.csv").string();
        write_series_csv(csv, "t,l2,weighted_l2", rows);
        out.files.push_back("decay.csv");
        json dj{{"series", "decay.csv"}};
        const double t1 = std::min(cap, tr.tg.back());
        const double t0 = t1 / 10.0;
        if (!zero_field && !series.empty() && series.back().first >= t1 * (1.0 - 1e-9)) {
            try {
                DecayReport rep = decay_slope(series, t0, t1, g, "l2");
                dj["fit"] = {{"t0", rep.t0},       {"t1", rep.t1},
                             {"exponent", rep.exponent}, {"intercept", rep.intercept},
                             {"residual", rep.residual}, {"points", rep.points},
                             {"window_valid", rep.window_valid}};
            } catch (const std::exception& e) {
                dj["fit"] = {{"skipped", e.what()}};
            }
        } else {
            dj["fit"] = {{"skipped", zero_field ? "zero field" : "series too short"}};
        }
        summary["decay"] = dj;
    }

    // moment matrix of the stored trajectory (used by ms and fm_profile)
    MomentMatrix c{};
    bool have_c = false;
    std::string c_error;
    if (has("ms") || has("fm_profile")) {
        try {
            c = moment_matrix(tr, pick_t_cut(tr));
            have_c = true;
        } catch (const std::exception& e) {
            c_error = e.what();
        }
    }

    std::array<std::array<double, 3>, 3> force_integral{};
    if (!synth.is_null() && synth.contains("force_coeffs")) {
        const auto& fc = synth.at("force_coeffs");
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) force_integral[k][l] = fc.at(k).at(l).get<double>();
    }

    if (has("ms")) {
        if (have_c) {
            const double tol =
                10.0 * (synth.is_null() ? 1e-6 : synth.value("tol", 1e-6));
            MSReport rep = ms_residual(c, force_integral, tol);
            summary["ms"] = {{"beta", matrix_json(rep.beta, n)},
                             {"scalar_part", rep.scalar_part},
                             {"deviation", rep.deviation},
                             {"tolerance", rep.tolerance},
                             {"pass", rep.pass}};
        } else {
            summary["ms"] = {{"skipped", c_error}};
        }
    }

    if (has("fm_profile")) {
        if (have_c && !zero_field) {
            NormReport nr = norms_and_moments(a, {1.0});
            std::vector<double> nodes;
            for (std::size_t i = 1; i < tr.size(); ++i) {
                const double t = tr.time(i);
                if (t > 0.0 && t <= cap * (1.0 + 1e-12)) nodes.push_back(t);
            }
            ProfileResidualReport rep =
                fm_profile_residual(tr, nr.first_moments, force_integral, c, 2.0, nodes);
            std::vector<std::array<double, 3>> rows;
            for (std::size_t i = 0; i < rep.times.size(); ++i) {
                const double w = std::pow(rep.times[i], 0.5 + 0.5 * n * (1.0 - 1.0 / rep.q));
                rows.push_back({rep.times[i], rep.weighted_residual[i] / w,
                                rep.weighted_residual[i]});
            }
            write_series_csv((fs::path(dir) / "fm_profile.csv").string(),
                             "t,value,weighted_value", rows);
            out.files.push_back("fm_profile.csv");
            summary["fm_profile"] = {{"series", "fm_profile.csv"}, {"q", rep.q}};
        } else {
            summary["fm_profile"] = {{"skipped", zero_field ? "zero field" : c_error}};
        }
    }

    if (has("lemma_heat2")) {
        std::vector<double> nodes;
        for (std::size_t i = 1; i < tr.size(); ++i) {
            const double t = tr.time(i);
            if (t > 0.0 && t <= cap * (1.0 + 1e-12)) nodes.push_back(t);
        }
        HeatMomentReport rep = lemma_heat2_check(a, nodes);
        std::vector<std::array<double, 3>> rows;
        for (std::size_t i = 0; i < rep.times.size(); ++i)
            rows.push_back({rep.times[i], rep.lhs[i], rep.ratio[i]});
        write_series_csv((fs::path(dir) / "lemma_heat2.csv").string(), "t,value,weighted_value",
                         rows);
        out.files.push_back("lemma_heat2.csv");
        summary["lemma_heat2"] = {{"series", "lemma_heat2.csv"},
                                  {"grad_e1_l2", rep.grad_e1_l2},
                                  {"holds", rep.holds}};
    }

    if (has("wiegner")) {
        WiegnerReport rep = wiegner_check(tr, a, calib);
        summary["wiegner"] = {{"c_emp", rep.c_emp},
                              {"k_functional", rep.k_functional},
                              {"nodes_used", rep.nodes_used},
                              {"pass", rep.pass}};
    }

    out.summary = std::move(summary);
    return out;
}

void write_summary(const std::string& dir, const json& summary) {
    std::ofstream out(fs::path(dir) / "summary.json");
    out << summary.dump(2) << "\n";
}

}  // namespace

json RunManifest::to_json() const {
    json arts = json::array();
    for (const auto& [p, h] : artifacts) arts.push_back(json{{"path", p}, {"fnv1a64", h}});
    return json{{"format", "nsforge-manifest"}, {"config_hash", config_hash},
                {"mode", mode},                 {"artifacts", arts},
                {"created", created},           {"wall_clock_seconds", wall_clock_seconds},
                {"counts", counts}};
}

RunManifest RunManifest::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("manifest: cannot open " + path);
    json j;
    in >> j;
    RunManifest m;
    m.config_hash = j.at("config_hash").get<std::string>();
    m.mode = j.at("mode").get<std::string>();
    for (const auto& a : j.at("artifacts"))
        m.artifacts.emplace_back(a.at("path").get<std::string>(),
                                 a.at("fnv1a64").get<std::string>());
    m.created = j.value("created", "");
    m.wall_clock_seconds = j.value("wall_clock_seconds", 0.0);
    m.counts = j.value("counts", json::object());
    return m;
}

void RunManifest::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("manifest: cannot write " + path);
    out << to_json().dump(2) << "\n";
}

bool RunManifest::verify(const std::string& run_dir) const {
    for (const auto& [p, h] : artifacts) {
        const std::string full = (fs::path(run_dir) / p).string();
        if (!fs::exists(full)) return false;
        if (hex64(fnv1a64_file(full)) != h) return false;
    }
    return true;
}

RunManifest run_experiment(const ExperimentConfig& cfg, const std::string& mode) {
    if (mode != "simulate" && mode != "synthesize")
        throw std::invalid_argument("run_experiment: mode must be simulate or synthesize");
    const auto t_start = std::chrono::steady_clock::now();
    const std::string dir = cfg.output_dir;
    fs::create_directories(dir);

    cfg.save((fs::path(dir) / "config.json").string());
    const Calibration calib = cfg.calibration_path.empty()
                                  ? Calibration::defaults()
                                  : Calibration::load(cfg.calibration_path);

    VectorField a = generate_data(cfg.grid, cfg.data_kind, cfg.data);
    if (cfg.lambda > 1) a = lambda_rescale(a, cfg.lambda);
    save_field(a, (fs::path(dir) / "a.nsf").string(), "initial data " + cfg.data_kind);

    json counts;
    if (mode == "synthesize") {
        json synth_info;
        synth_info["lambda"] = cfg.lambda;
        ForceProfile phi = make_profile(cfg, calib, a, synth_info);
        SynthesisState st = synthesize(a, phi, cfg.timegrid, cfg.synthesis, calib);

        save_trajectory(st.flow, (fs::path(dir) / "trajectory").string());
        // force export: profile slices plus per-node tensor containers
        save_slices(phi.grid, phi.times, phi.slices, phi.support_half_width(),
                    phi.time_extent(), (fs::path(dir) / "force_profile.nsf").string());
        fs::create_directories(fs::path(dir) / "force");
        const int n = cfg.grid.dim;
        for (std::size_t p = 0; p < phi.times.size(); ++p) {
            std::vector<std::vector<double>> comps;
            json layout = json::array();
            for (int k = 0; k < n; ++k)
                for (int l = k; l < n; ++l) {
                    std::vector<double> c(phi.slices[p]);
                    for (double& v : c) v *= st.force.coeffs[k][l];
                    comps.push_back(std::move(c));
                    layout.push_back(json::array({k, l}));
                }
            char name[32];
            std::snprintf(name, sizeof(name), "force/force_%04zu.nsf", p);
            save_components(cfg.grid, comps, (fs::path(dir) / name).string(),
                            json{{"kind", "force-tensor"},
                                 {"time", phi.times[p]},
                                 {"layout", layout},
                                 {"symmetric", true}});
        }

        synth_info["tol"] = cfg.synthesis.tol;
        synth_info["iterations"] = st.iterations;
        synth_info["converged"] = st.converged;
        synth_info["diverged"] = st.diverged;
        synth_info["message"] = st.message;
        synth_info["t_cut"] = st.t_cut;
        synth_info["delta_history"] = st.delta_history;
        synth_info["ratio_history"] = st.ratio_history;
        json ch = json::array();
        for (const auto& c : st.c_history)
            ch.push_back(json{{"entries", matrix_json(c.entries, cfg.grid.dim)},
                              {"trace", c.trace},
                              {"t_cut", c.t_cut},
                              {"tail_bound", c.tail_bound}});
        synth_info["c_history"] = ch;
        json fc = json::array();
        for (int k = 0; k < cfg.grid.dim; ++k) {
            json row = json::array();
            for (int l = 0; l < cfg.grid.dim; ++l) row.push_back(st.force.coeffs[k][l]);
            fc.push_back(row);
        }
        synth_info["force_coeffs"] = fc;
        synth_info["smallness"] = smallness_json(st.smallness);
        std::ofstream sout(fs::path(dir) / "synthesis.json");
        sout << synth_info.dump(2) << "\n";

        counts["outer_iterations"] = st.iterations;
    } else {
        Trajectory tr;
        if (cfg.integrator == "etd2") {
            tr = integrate(a, std::nullopt, cfg.timegrid, true);
        } else {
            PicardResult pr = picard_iterate(a, std::nullopt, cfg.picard, cfg.timegrid);
            if (!pr.converged)
                throw std::runtime_error("run_experiment: " + pr.message);
            counts["picard_iterations"] = pr.iterations;
            tr = std::move(pr.traj);
        }
        save_trajectory(tr, (fs::path(dir) / "trajectory").string());
    }

    DiagnosticsOutput reports = compute_reports(dir, cfg, calib);
    write_summary(dir, reports.summary);

    RunManifest man;
    man.mode = mode;
    man.created = timestamp_now();
    man.counts = counts;
    {
        std::ostringstream cfgs;
        cfgs << cfg.to_json().dump();
        const std::string s = cfgs.str();
        man.config_hash = hex64(fnv1a64_bytes(s.data(), s.size()));
    }
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string rel = fs::relative(entry.path(), dir).string();
        if (rel == "manifest.json") continue;
        man.artifacts.emplace_back(rel, hex64(fnv1a64_file(entry.path().string())));
    }
    std::sort(man.artifacts.begin(), man.artifacts.end());
    man.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    man.save((fs::path(dir) / "manifest.json").string());
    return man;
}

void diagnose_run(const std::string& run_dir) {
    ExperimentConfig cfg = ExperimentConfig::load((fs::path(run_dir) / "config.json").string());
    const Calibration calib = cfg.calibration_path.empty()
                                  ? Calibration::defaults()
                                  : Calibration::load(cfg.calibration_path);
    DiagnosticsOutput reports = compute_reports(run_dir, cfg, calib);
    write_summary(run_dir, reports.summary);
}

}  // namespace nsforge
