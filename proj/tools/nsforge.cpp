#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "nsforge/diagnostics.hpp"
#include "nsforge/experiment.hpp"
#include "nsforge/field_io.hpp"
#include "nsforge/spectral.hpp"

using namespace nsforge;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    long long seed = -1;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "experiment config (JSON)")->required();
    cmd->add_option("--out", o.out_dir, "output directory (overrides config)");
    cmd->add_option("--seed", o.seed, "data generator seed (overrides config)");
    cmd->add_option("--override", o.overrides, "dotted-path override key=value");
}

ExperimentConfig load_with_overrides(const CommonOpts& o) {
    std::ifstream in(o.config_path);
    if (!in) throw std::runtime_error("cannot open config " + o.config_path);
    json j;
    in >> j;
    for (const auto& kv : o.overrides) ExperimentConfig::apply_override(j, kv);
    ExperimentConfig cfg = ExperimentConfig::from_json(j);
    if (!o.out_dir.empty()) cfg.output_dir = o.out_dir;
    if (o.seed >= 0) cfg.data.seed = static_cast<std::uint64_t>(o.seed);
    return cfg;
}

int run_mode(const CommonOpts& o, const std::string& mode) {
    ExperimentConfig cfg = load_with_overrides(o);
    RunManifest man = run_experiment(cfg, mode);
    std::cout << mode << " finished in " << std::fixed << std::setprecision(1)
              << man.wall_clock_seconds << " s, " << man.artifacts.size()
              << " artifacts in " << cfg.output_dir << "\n";
    return 0;
}

// Picard-vs-integrator and analytic-heat cross-checks on the configured data.
int run_oracle(const CommonOpts& o) {
    ExperimentConfig cfg = load_with_overrides(o);
    const Calibration calib = cfg.calibration_path.empty()
                                  ? Calibration::defaults()
                                  : Calibration::load(cfg.calibration_path);
    VectorField a = generate_data(cfg.grid, cfg.data_kind, cfg.data);

    std::cout << "oracle cross-checks on " << cfg.data_kind << " (N=" << cfg.grid.points
              << ", L=" << cfg.grid.length << ")\n";

    PicardResult pr = picard_iterate(a, std::nullopt, cfg.picard, cfg.timegrid);
    Trajectory te = integrate(a, std::nullopt, cfg.timegrid, true);
    double worst = 0.0;
    for (std::size_t i = 0; i < pr.traj.size(); ++i) {
        VectorField d = axpy(-1.0, te.at(i), pr.traj.at(i));
        const double ref = lp_norm(pr.traj.at(i), 2.0);
        if (ref > 0.0) worst = std::max(worst, lp_norm(d, 2.0) / ref);
    }
    std::cout << "  picard converged: " << (pr.converged ? "yes" : "no") << " ("
              << pr.iterations << " iterations)\n";
    std::cout << "  picard vs etd2 max relative L2 difference: " << std::scientific
              << worst << "\n";

    Trajectory th = integrate(a, std::nullopt, cfg.timegrid, false);
    double worst_heat = 0.0;
    for (std::size_t i = 0; i < th.size(); ++i) {
        VectorField d = axpy(-1.0, heat_propagate(a, th.time(i)), th.at(i));
        const double ref = lp_norm(a, 2.0);
        if (ref > 0.0) worst_heat = std::max(worst_heat, lp_norm(d, 2.0) / ref);
    }
    std::cout << "  linear marching vs heat semigroup: " << worst_heat << "\n";

    KatoNormReport kn = kato_norms(pr.traj);
    Functionals fn = functionals(a, calib);
    std::cout << "  int ||u||_2^2 = " << kn.l2time_integral << " (tail bound "
              << kn.l2time_tail_bound << ")\n";
    const int n = cfg.grid.dim;
    const double jan = std::pow(fn.J, 4.0 / (n + 1)) *
                       std::pow(lp_norm(a, 2.0), 2.0 * (n - 1) / (n + 1));
    if (jan > 0.0)
        std::cout << "  measured gamma (L2-in-time constant): " << kn.l2time_integral / jan
                  << "\n";
    return 0;
}

// Amplitude / lambda / R sweeps; emits sweep.csv and per-run directories.
int run_sweep(const CommonOpts& o, const std::string& axis,
              const std::vector<double>& values) {
    ExperimentConfig base = load_with_overrides(o);
    const Calibration calib = base.calibration_path.empty()
                                  ? Calibration::defaults()
                                  : Calibration::load(base.calibration_path);
    fs::create_directories(base.output_dir);
    std::ofstream csv(fs::path(base.output_dir) / "sweep.csv");
    csv << "value,a_n,picard_ratio,picard_converged,outer_ratio,outer_iterations,"
           "l2time_integral,gamma_measured,snorm_lhs\n";
    csv << std::setprecision(17);

    int idx = 0;
    for (double v : values) {
        ExperimentConfig cfg = base;
        cfg.output_dir = (fs::path(base.output_dir) / ("run_" + std::to_string(idx))).string();
        if (axis == "amplitude")
            cfg.data.amplitude = v;
        else if (axis == "lambda")
            cfg.lambda = static_cast<int>(v);
        else if (axis == "R")
            cfg.auto_R = false;
        else
            throw std::runtime_error("sweep axis must be amplitude, lambda or R");

        VectorField a = generate_data(cfg.grid, cfg.data_kind, cfg.data);
        if (cfg.lambda > 1) a = lambda_rescale(a, cfg.lambda);
        const int n = cfg.grid.dim;
        NormReport norms = norms_and_moments(a, functional_exponents(n));
        Functionals fn = functionals_from_norms(norms, n, calib);
        const double a_n = lp_norm(a, static_cast<double>(n));

        PicardResult pr = picard_iterate(a, std::nullopt, cfg.picard, cfg.timegrid);
        double max_ratio = 0.0;
        for (double r : pr.ratio_history) max_ratio = std::max(max_ratio, r);

        double outer_ratio = 0.0;
        int outer_iters = 0;
        double l2time = 0.0, gamma_meas = 0.0;
        if (pr.converged) {
            KatoNormReport kn = kato_norms(pr.traj);
            l2time = kn.l2time_integral;
            const double jan = std::pow(fn.J, 4.0 / (n + 1)) *
                               std::pow(norms.lp_values.at(2.0), 2.0 * (n - 1) / (n + 1));
            gamma_meas = jan > 0.0 ? l2time / jan : 0.0;
            if (axis != "amplitude" || max_ratio < 0.9) {
                try {
                    ProfileBase pb = ProfileBase::builtin_bump(
                        cfg.profile_half_width, cfg.profile_time_extent,
                        cfg.profile_time_samples);
                    ForceProfile phi = cfg.auto_R ? choose_R(a, pb, calib).profile
                                                  : realize_profile(pb, cfg.grid,
                                                                    axis == "R" ? v : 1.0);
                    SynthesisOptions opts = cfg.synthesis;
                    opts.override_smallness = true;
                    SynthesisState st = synthesize(a, phi, cfg.timegrid, opts, calib);
                    outer_iters = st.iterations;
                    for (double r : st.ratio_history) outer_ratio = std::max(outer_ratio, r);
                } catch (const std::exception& e) {
                    std::cerr << "  sweep value " << v << ": synthesis failed: " << e.what()
                              << "\n";
                }
            }
        }
        const double snorm =
            std::pow(a_n, 1.0 / n) * (std::pow(fn.J, 1.0 - 1.0 / n) +
                                      std::pow(norms.lp_values.at(2.0), 1.0 - 1.0 / n));
        csv << v << "," << a_n << "," << max_ratio << "," << pr.converged << ","
            << outer_ratio << "," << outer_iters << "," << l2time << "," << gamma_meas << ","
            << snorm << "\n";
        std::cout << "sweep " << axis << "=" << v << ": picard_ratio=" << max_ratio
                  << " outer_ratio=" << outer_ratio << " gamma=" << gamma_meas << "\n";
        ++idx;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nsforge: forced rapid-dissipation laboratory for small-data Navier-Stokes"};
    app.require_subcommand(1);

    CommonOpts sim_o, syn_o, orc_o, swp_o;
    std::string diag_dir;
    std::string sweep_axis = "amplitude";
    std::vector<double> sweep_values;

    CLI::App* sim = app.add_subcommand("simulate", "solver only, no forcing");
    add_common(sim, sim_o);
    CLI::App* syn = app.add_subcommand("synthesize", "full force-synthesis loop");
    add_common(syn, syn_o);
    CLI::App* dia = app.add_subcommand("diagnose", "recompute reports from a stored run");
    dia->add_option("run_dir", diag_dir, "run directory")->required();
    CLI::App* swp = app.add_subcommand("sweep", "amplitude/lambda/R sweeps");
    add_common(swp, swp_o);
    swp->add_option("--axis", sweep_axis, "amplitude | lambda | R");
    swp->add_option("--values", sweep_values, "sweep values")->required();
    CLI::App* orc = app.add_subcommand("oracle", "picard-vs-integrator and analytic cross-checks");
    add_common(orc, orc_o);

    try {
        app.parse(argc, argv);
        if (sim->parsed()) return run_mode(sim_o, "simulate");
        if (syn->parsed()) return run_mode(syn_o, "synthesize");
        if (dia->parsed()) {
            diagnose_run(diag_dir);
            std::cout << "reports regenerated in " << diag_dir << "\n";
            return 0;
        }
        if (swp->parsed()) return run_sweep(swp_o, sweep_axis, sweep_values);
        if (orc->parsed()) return run_oracle(orc_o);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
