// Acceptance suite: one check per numbered criterion, one pass/fail line each.
// Exit code is the number of failing criteria.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "nsforge/datagen.hpp"
#include "nsforge/diagnostics.hpp"
#include "nsforge/spectral.hpp"

using namespace nsforge;

namespace {

int g_failures = 0;

struct Criterion {
    const char* id;
    const char* label;
    std::function<std::string()> run;  // returns detail text, throws on failure
};

struct CheckFail : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw CheckFail(what);
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

double fit_slope(const std::vector<std::pair<double, double>>& pts) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int m = static_cast<int>(pts.size());
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

GridSpec make_grid(int dim, int n, double L) {
    GridSpec g;
    g.dim = dim;
    g.points = n;
    g.length = L;
    return g;
}

double rel_l2(const VectorField& ref, const VectorField& x) {
    VectorField d = axpy(-1.0, x, ref);
    const double r = lp_norm(ref, 2.0);
    return r > 0.0 ? lp_norm(d, 2.0) / r : lp_norm(d, 2.0);
}

// ---------------------------------------------------------------------------
// C1: operator identities at 1e-12, N = 128
std::string c1_operator_identities() {
    double worst = 0.0;
    for (const GridSpec& g : {make_grid(2, 128, 32.0), make_grid(3, 32, 16.0)}) {
        VectorField u = generate_data(g, "random_solenoidal", {0.7, g.length / 16.0, 5, 0});
        // Leray fixes its range and is idempotent
        VectorField pu = leray_project(u);
        worst = std::max(worst, rel_l2(u, pu));
        worst = std::max(worst, rel_l2(pu, leray_project(pu)));
        // gradient annihilation
        std::vector<double> psi(g.cells());
        for_each_point(g, [&](std::size_t i, const std::array<double, 3>& x) {
            double r2 = 0.0;
            for (int d = 0; d < g.dim; ++d) r2 += x[d] * x[d];
            psi[i] = std::exp(-r2 / (g.length / 5.0));
        });
        VectorField gr = gradient(g, psi);
        worst = std::max(worst, max_abs(leray_project(gr)) / max_abs(gr));
        // heat semigroup law
        VectorField two = heat_propagate(heat_propagate(u, 0.4), 0.35);
        worst = std::max(worst, rel_l2(heat_propagate(u, 0.75), two));
        // apply_F equals the three-step composition
        TensorField t = outer_product(u, u, true);
        worst = std::max(worst,
                         rel_l2(heat_propagate(leray_project(tensor_divergence(t)), 0.5),
                                apply_F(t, 0.5)));
    }
    require(worst <= 1e-12, fmt("worst identity residual %.2e > 1e-12", worst));
    return fmt("worst relative residual %.2e <= 1e-12 (2D N=128, 3D N=32)", worst);
}

// C2: F-kernel norm law, 1% on the exponents over one decade
std::string c2_kernel_norm_law() {
    const GridSpec g = make_grid(2, 256, 64.0);
    const double t_lo = std::pow(8.0 * g.dx(), 2.0), t_hi = 10.0 * t_lo;
    std::string detail;
    for (double p : {1.0, 2.0}) {
        const double rho = (p == 1.0) ? 4.0 : 0.0;  // see F_kernel_lp_norm on L1 tails
        std::vector<std::pair<double, double>> pts;
        for (int i = 0; i < 12; ++i) {
            const double t = t_lo * std::pow(t_hi / t_lo, i / 11.0);
            pts.emplace_back(std::log(t), std::log(F_kernel_lp_norm(g, t, p, rho)));
        }
        const double slope = fit_slope(pts);
        const double expected = -(g.dim + 1) / 2.0 + g.dim / (2.0 * p);
        const double err = std::abs(slope - expected) / std::abs(expected);
        require(err <= 0.01, fmt("p=%g slope %.4f vs %.4f (err %.2f%%)", p, slope, expected,
                                 100.0 * err));
        detail += fmt("p=%g: %.4f (expect %.2f, err %.2f%%) ", p, slope, expected, 100.0 * err);
    }
    return detail;
}

// C3: Lemma 3.2 with the explicit constant, three data families
std::string c3_heat_moment_lemma() {
    const double c2d = grad_e1_l2_norm(2);
    const double exact = 1.0 / (4.0 * std::sqrt(M_PI));
    require(std::abs(c2d - exact) <= 1e-6 * exact,
            fmt("grad E_1 constant %.8f vs %.8f", c2d, exact));
    const GridSpec g = make_grid(2, 128, 32.0);
    std::vector<double> nodes;
    for (double t = 0.25; t <= 16.0; t *= 1.5) nodes.push_back(t);
    for (const char* kind : {"gaussian_vortex", "moment_free", "random_solenoidal"}) {
        VectorField a = generate_data(g, kind, {0.3, 1.0, 5, 0});
        HeatMomentReport rep = lemma_heat2_check(a, nodes);
        require(rep.holds, fmt("bound violated for %s", kind));
    }
    return fmt("||grad E_1||_2 = %.7f (= 1/(4 sqrt(pi)) to %.1e); bound holds for 3 families",
               c2d, std::abs(c2d - exact) / exact);
}

// C4: Picard vs exponential integrator, 1e-6 relative L2 on [0,1]
std::string c4_oracle_equivalence() {
    const GridSpec g = make_grid(2, 128, 32.0);
    TimeGrid tg = TimeGrid::uniform(1.0, 512);
    VectorField a = generate_data(g, "moment_free", {1.0, 1.0, 0, 0});
    PicardResult pr = picard_iterate(a, std::nullopt, {40, 1e-11}, tg);
    require(pr.converged, "picard did not converge");
    Trajectory te = integrate(a, std::nullopt, tg, true);
    double worst = 0.0;
    for (std::size_t i = 0; i < tg.size(); ++i) {
        const double ref = lp_norm(pr.traj.at(i), 2.0);
        if (ref > 0.0)
            worst = std::max(worst, lp_norm(axpy(-1.0, te.at(i), pr.traj.at(i)), 2.0) / ref);
    }
    require(worst <= 1e-6, fmt("max relative L2 difference %.2e > 1e-6", worst));
    return fmt("max relative L2 difference %.2e <= 1e-6 (N=128, 512 steps)", worst);
}

// C5: heat decay slopes, generic -1.00 +- 0.03 and moment-free -1.50 +- 0.05
std::string c5_heat_decay_rates() {
    const GridSpec g = make_grid(2, 256, 64.0);
    TimeGrid tg = TimeGrid::geometric(64.0, 1e-2, 1.15);
    std::string detail;
    struct Case {
        const char* kind;
        double expect, tol;
    };
    for (const Case& c : {Case{"gaussian_vortex", -1.0, 0.03}, Case{"moment_free", -1.5, 0.05}}) {
        VectorField a = generate_data(g, c.kind, {0.05, 0.4, 0, 0});
        Trajectory tr = integrate(a, std::nullopt, tg, false);
        std::vector<std::pair<double, double>> series;
        const auto& l2 = tr.series(2.0);
        for (std::size_t i = 1; i < tr.size(); ++i) series.emplace_back(tr.time(i), l2[i]);
        DecayReport rep = decay_slope(series, 6.4, 64.0, g, c.kind);
        require(std::abs(rep.exponent - c.expect) <= c.tol,
                fmt("%s slope %.4f vs %.2f +- %.2f", c.kind, rep.exponent, c.expect, c.tol));
        detail += fmt("%s: %.3f (expect %.2f) ", c.kind, rep.exponent, c.expect);
    }
    return detail;
}

// C6: Picard contraction at the calibrated amplitude, flagged at 100x
std::string c6_picard_contraction() {
    const Calibration calib = Calibration::defaults();
    const GridSpec g = make_grid(2, 256, 64.0);
    TimeGrid tg = TimeGrid::geometric(64.0, 1e-3, 1.2);
    // amplitude chosen so ||a||_n hits the calibrated delta
    DataParams dp;
    dp.width = 0.6;
    dp.seed = 2024;
    dp.band_modes = 64;
    dp.amplitude = 1.0;
    VectorField unit = generate_data(g, "random_solenoidal", dp);
    const double unit_norm = lp_norm(unit, 2.0);
    dp.amplitude = calib.dim(2).delta / unit_norm;
    VectorField a = generate_data(g, "random_solenoidal", dp);

    PicardResult ok = picard_iterate(a, std::nullopt, {40, 1e-9}, tg);
    require(ok.converged, "no convergence at the calibrated amplitude");
    double maxr = 0.0;
    for (double r : ok.ratio_history) maxr = std::max(maxr, r);
    require(maxr <= 0.5, fmt("ratio %.3f > 0.5 at the calibrated amplitude", maxr));

    dp.amplitude *= 100.0;
    VectorField huge = generate_data(g, "random_solenoidal", dp);
    PicardResult bad = picard_iterate(huge, std::nullopt, {40, 1e-9}, tg);
    require(!bad.contracted, "non-contraction not flagged at 100x amplitude");
    return fmt("||a||_2 = %.1f: max ratio %.3f <= 0.5; 100x flagged", calib.dim(2).delta, maxr);
}

struct SynthRun {
    SynthesisState st;
    VectorField a;
    GridSpec grid;
    TimeGrid tg;
};

SynthRun& reference_run() {
    static SynthRun run = [] {
        SynthRun r;
        const Calibration calib = Calibration::defaults();
        r.grid = make_grid(2, 256, 64.0);
        r.tg = TimeGrid::geometric(64.0, 1e-3, 1.2);
        r.a = generate_data(r.grid, "random_solenoidal", {5.0, 0.6, 2024, 64});
        ChooseRResult cr = choose_R(r.a, ProfileBase::builtin_bump(1.0, 0.25, 33), calib);
        SynthesisOptions opts;
        opts.tol = 1e-6;
        opts.max_outer = 25;
        opts.picard = {40, 1e-9};
        r.st = synthesize(r.a, cr.profile, r.tg, opts, calib);
        return r;
    }();
    return run;
}

// C7: synthesis convergence on the reference 2D config
std::string c7_synthesis_convergence() {
    SynthRun& r = reference_run();
    require(r.st.converged, "outer loop did not reach tol");
    require(r.st.iterations <= 25, fmt("%d iterations > 25", r.st.iterations));
    double maxr = 0.0;
    bool decreasing = true;
    for (std::size_t i = 0; i < r.st.ratio_history.size(); ++i) {
        maxr = std::max(maxr, r.st.ratio_history[i]);
        if (i > 0 && r.st.ratio_history[i] > r.st.ratio_history[i - 1]) decreasing = false;
    }
    require(maxr <= 0.9, fmt("outer ratio %.3f > 0.9", maxr));
    require(decreasing, "outer ratios not decreasing");
    // fixed-point consistency
    MomentMatrix cv = moment_matrix(r.st.flow, r.st.t_cut);
    double diff = 0.0;
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
            const double d = cv.entries[k][l] - r.st.c_history.back().entries[k][l];
            diff += d * d;
        }
    diff = std::sqrt(diff);
    require(diff <= 3e-6 * cv.frobenius(),
            fmt("moment_matrix(v) vs c^(M): %.2e > 3 tol ||c||", diff));
    return fmt("converged m=%d, max outer ratio %.1e <= 0.9, consistency %.1e <= %.1e",
               r.st.iterations, maxr, diff, 3e-6 * cv.frobenius());
}

// C8: Miyakawa-Schonbek condition by construction
std::string c8_ms_condition() {
    SynthRun& r = reference_run();
    std::array<std::array<double, 3>, 3> w{};
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) w[k][l] = r.st.force.coeffs[k][l];
    MSReport rep = ms_residual(r.st.c_history.back(), w, 10.0 * 1e-6);
    require(rep.pass, fmt("deviation %.2e > 10 tol (1+|tr|)", rep.deviation));
    const double diag_gap = std::abs(rep.beta[0][0] - rep.beta[1][1]);
    require(diag_gap <= rep.tolerance * (1.0 + std::abs(2.0 * rep.scalar_part)),
            fmt("diagonal beta entries differ by %.2e", diag_gap));
    return fmt("beta deviation %.1e, diagonal gap %.1e, beta = %.4f I", rep.deviation, diag_gap,
               rep.scalar_part);
}

// C9: rapid dissipation for moment-free data (desk-scale surrogate)
std::string c9_rapid_dissipation() {
    const Calibration calib = Calibration::defaults();
    const GridSpec g = make_grid(2, 256, 64.0);
    TimeGrid tg = TimeGrid::geometric(64.0, 1e-3, 1.2);
    // amplitude sits inside the measured contraction region but beyond the
    // conservative (A2)-(A6) sufficient conditions; synthesize is invoked with
    // the explicit override the spec provides for that case
    VectorField a = generate_data(g, "moment_free", {20.0, 0.6, 0, 0});
    PicardResult unf = picard_iterate(a, std::nullopt, {40, 1e-9}, tg);
    require(unf.converged, "unforced solve failed");
    ForceProfile phi = realize_profile(ProfileBase::builtin_bump(1.0, 0.25, 33), g, 8.0);
    SynthesisOptions opts;
    opts.tol = 1e-6;
    opts.max_outer = 25;
    opts.override_smallness = true;
    opts.picard = {40, 1e-9};
    SynthesisState st = synthesize(a, phi, tg, opts, calib);
    require(st.converged, "synthesis did not converge");

    const auto& lf = st.flow.series(2.0);
    const auto& lu = unf.traj.series(2.0);
    double first_f = 0.0, last_f = 0.0, first_u = 0.0, last_u = 0.0;
    bool strictly_decreasing = true;
    double prev = -1.0;
    for (std::size_t i = 1; i < tg.size(); ++i) {
        const double t = tg.nodes[i];
        if (t < 6.4 || t > 64.0 * (1 + 1e-12)) continue;
        const double wf = t * lf[i], wu = t * lu[i];
        if (prev >= 0.0 && wf >= prev) strictly_decreasing = false;
        prev = wf;
        if (first_f == 0.0) {
            first_f = wf;
            first_u = wu;
        }
        last_f = wf;
        last_u = wu;
    }
    require(strictly_decreasing, "t ||v(t)||_2 not strictly decreasing over the last decade");
    // plateau: the unforced weighted norm moves by less than a factor 2 while
    // the forced one keeps falling
    require(last_u >= 0.5 * first_u,
            fmt("unforced t||u||_2 fell by %.2f over the decade (no plateau)", last_u / first_u));
    const double ratio = lf[tg.size() - 1] / lu[tg.size() - 1];
    require(ratio <= 0.5, fmt("forced/unforced L2 ratio %.3f > 0.5 at t=%g", ratio, tg.back()));
    return fmt("t||v||_2: %.3f -> %.3f (strict); unforced plateau %.3f -> %.3f; final ratio %.3f",
               first_f, last_f, first_u, last_u, ratio);
}

// C10: scale invariances under lambda = 2
std::string c10_scale_invariances() {
    const Calibration calib = Calibration::defaults();
    std::string detail;
    {
        // J and K identities at 1e-6 (N = 2048: the |a|^p integrands have
        // conical points, so the L1-type quadratures converge at h^3)
        const GridSpec g = make_grid(2, 2048, 32.0);
        VectorField a = generate_data(g, "gaussian_vortex", {0.5, 1.6, 0, 0});
        VectorField a2 = lambda_rescale(a, 2);
        Functionals f = functionals(a, calib), f2 = functionals(a2, calib);
        const double jerr = std::abs(std::pow(2.0, 1.5) * f2.J - f.J) / f.J;
        const double kerr = std::abs(4.0 * f2.K - f.K) / f.K;
        require(jerr <= 1e-6, fmt("J identity error %.2e > 1e-6", jerr));
        require(kerr <= 1e-6, fmt("K identity error %.2e > 1e-6", kerr));
        detail += fmt("J err %.1e, K err %.1e; ", jerr, kerr);
    }
    {
        // norm identities at 1e-8
        const GridSpec g = make_grid(2, 128, 32.0);
        VectorField a = generate_data(g, "gaussian_vortex", {0.5, 1.2, 0, 0});
        VectorField a2 = lambda_rescale(a, 2);
        const double en = std::abs(lp_norm(a2, 2.0) - lp_norm(a, 2.0)) / lp_norm(a, 2.0);
        require(en <= 1e-8, fmt("||a_lambda||_n error %.2e > 1e-8", en));
        detail += fmt("norm identities %.1e; ", en);
    }
    {
        // wiegner stability within 5%
        const GridSpec g = make_grid(2, 256, 64.0);
        VectorField a = generate_data(g, "gaussian_vortex", {0.02, 1.6, 0, 0});
        VectorField a2 = lambda_rescale(a, 2);
        TimeGrid tg = TimeGrid::geometric(32.0, 1e-3, 1.2);
        WiegnerReport r1 = wiegner_check(integrate(a, std::nullopt, tg, true), a, calib);
        WiegnerReport r2 =
            wiegner_check(integrate(a2, std::nullopt, tg.scaled(0.25), true), a2, calib);
        const double drift = std::abs(r1.c_emp - r2.c_emp) / r1.c_emp;
        require(drift <= 0.05, fmt("C_emp drift %.3f > 5%%", drift));
        detail += fmt("C_emp drift %.2f%%", 100.0 * drift);
    }
    return detail;
}

// C11: arbitrarily prescribed profile (Theorem 2.3(ii))
std::string c11_prescribed_profile() {
    const Calibration calib = Calibration::defaults();
    const GridSpec g = make_grid(2, 256, 64.0);
    TimeGrid tg = TimeGrid::geometric(64.0, 1e-3, 1.2);

    // asymmetric user bump on [-2,2]^2 x [0, 0.1]
    const double M = 2.0, T0 = 0.1;
    std::vector<double> times;
    for (int i = 0; i < 17; ++i) times.push_back(T0 * i / 16.0);
    std::vector<std::vector<double>> slices;
    for (double t : times) {
        std::vector<double> s(g.cells());
        const double tau = t / T0;
        const double tb = (tau <= 0.0 || tau >= 1.0)
                              ? 0.0
                              : std::exp(-1.0 / tau) * std::exp(-1.0 / (1.0 - tau));
        for_each_point(g, [&](std::size_t i, const std::array<double, 3>& x) {
            const double r1 = std::abs(x[0]) / M, r2 = std::abs(x[1]) / M;
            double sp = 0.0;
            if (r1 < 1.0 && r2 < 1.0)
                sp = (1.0 + 0.6 * x[0] / M + 0.3 * x[1] / M) * (1.0 - r1 * r1) *
                     (1.0 - r2 * r2);
            s[i] = sp * tb;
        });
        slices.push_back(std::move(s));
    }
    ProfileBase base = ProfileBase::from_samples(g, times, slices, M, T0);
    VectorField a = generate_data(g, "random_solenoidal", {2.0, 0.6, 2024, 64});
    ChooseRResult cr = choose_R(a, base, calib);
    SynthesisOptions opts;
    opts.tol = 1e-6;
    opts.max_outer = 25;
    opts.picard = {40, 1e-9};
    SynthesisState st = synthesize(a, cr.profile, tg, opts, calib);
    require(st.converged, "synthesis with the prescribed profile did not converge");
    require(std::abs(cr.profile.space_time_integral() - 1.0) <= 1e-10, "profile not normalized");

    // degenerate profile: odd in x1, space-time integral zero
    std::vector<std::vector<double>> odd;
    for (double t : times) {
        std::vector<double> s(g.cells());
        const double tau = t / T0;
        const double tb = (tau <= 0.0 || tau >= 1.0)
                              ? 0.0
                              : std::exp(-1.0 / tau) * std::exp(-1.0 / (1.0 - tau));
        for_each_point(g, [&](std::size_t i, const std::array<double, 3>& x) {
            const double r1 = std::abs(x[0]) / M, r2 = std::abs(x[1]) / M;
            s[i] = (r1 < 1.0 && r2 < 1.0)
                       ? (x[0] / M) * (1.0 - r1 * r1) * (1.0 - r2 * r2) * tb
                       : 0.0;
        });
        odd.push_back(std::move(s));
    }
    bool rejected = false;
    try {
        normalize_profile(g, times, odd, M, T0);
    } catch (const std::exception&) {
        rejected = true;
    }
    require(rejected, "degenerate profile (zero integral) was not rejected");
    return fmt("asymmetric bump on t in [0, %.2g]: R=%g, converged m=%d; zero-integral rejected",
               T0, cr.R, st.iterations);
}

}  // namespace

int main() {
    std::vector<Criterion> criteria{
        {"C1", "operator identities (Leray, semigroup, F composition)", c1_operator_identities},
        {"C2", "F-kernel norm law exponents", c2_kernel_norm_law},
        {"C3", "heat-moment lemma with explicit constant", c3_heat_moment_lemma},
        {"C4", "Picard vs exponential integrator", c4_oracle_equivalence},
        {"C5", "heat decay rates", c5_heat_decay_rates},
        {"C6", "Picard contraction at calibrated amplitude", c6_picard_contraction},
        {"C7", "synthesis convergence on the reference config", c7_synthesis_convergence},
        {"C8", "Miyakawa-Schonbek condition by construction", c8_ms_condition},
        {"C9", "rapid dissipation vs matched unforced run", c9_rapid_dissipation},
        {"C10", "scale invariances under lambda rescaling", c10_scale_invariances},
        {"C11", "arbitrarily prescribed force profile", c11_prescribed_profile},
    };
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        try {
            std::string detail = c.run();
            const double dt =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::printf("[PASS] %-4s %s: %s (%.1f s)\n", c.id, c.label, detail.c_str(), dt);
        } catch (const std::exception& e) {
            const double dt =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::printf("[FAIL] %-4s %s: %s (%.1f s)\n", c.id, c.label, e.what(), dt);
            ++g_failures;
        }
        std::fflush(stdout);
    }
    if (g_failures == 0)
        std::printf("acceptance: all %zu criteria passed\n", criteria.size());
    else
        std::printf("acceptance: %d criteria FAILED\n", g_failures);
    return g_failures;
}
