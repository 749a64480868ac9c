#include "nsforge/synthesis.hpp"

#include <cmath>
#include <stdexcept>

#include "nsforge/spectral.hpp"

namespace nsforge {

double MomentMatrix::frobenius() const {
    double s = 0.0;
    for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l) s += entries[k][l] * entries[k][l];
    return std::sqrt(s);
}

double MomentMatrix::min_eigenvalue() const {
    if (dim == 2) {
        const double a = entries[0][0], b = entries[0][1], d = entries[1][1];
        const double mean = 0.5 * (a + d);
        const double disc = std::sqrt(0.25 * (a - d) * (a - d) + b * b);
        return mean - disc;
    }
    // 3x3 symmetric: eigenvalues via the trigonometric closed form
    const auto& m = entries;
    const double q = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
    double p2 = 0.0;
    for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
            const double v = m[k][l] - (k == l ? q : 0.0);
            p2 += v * v;
        }
    const double p = std::sqrt(p2 / 6.0);
    if (p == 0.0) return q;
    double det = 0.0;
    {
        double b[3][3];
        for (int k = 0; k < 3; ++k)
            for (int l = 0; l < 3; ++l) b[k][l] = (m[k][l] - (k == l ? q : 0.0)) / p;
        det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
              b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
              b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    }
    const double r = std::clamp(det / 2.0, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    // smallest eigenvalue
    return q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
}

namespace {

// Pointwise spatial Gram matrix int u_k u_l dx at one node.
std::array<std::array<double, 3>, 3> spatial_gram(const VectorField& u) {
    const VectorField up = to_physical(u);
    const GridSpec& g = up.grid;
    std::array<std::array<double, 3>, 3> m{};
    const std::size_t npts = g.cells();
    for (int k = 0; k < g.dim; ++k)
        for (int l = k; l < g.dim; ++l) {
            double acc = 0.0;
            for (std::size_t i = 0; i < npts; ++i) acc += up.phys[k][i] * up.phys[l][i];
            m[k][l] = m[l][k] = acc * g.cell_volume();
        }
    return m;
}

// gram and envelope series computed in one pass over the snapshots
struct GramSeries {
    std::vector<double> times;
    std::vector<std::array<std::array<double, 3>, 3>> gram;
    std::vector<double> l2;
    int dim = 2;

    explicit GramSeries(const Trajectory& tr) : dim(tr.grid.dim) {
        times = tr.tg.nodes;
        gram.reserve(tr.size());
        l2.reserve(tr.size());
        for (std::size_t i = 0; i < tr.size(); ++i) {
            gram.push_back(spatial_gram(tr.at(i)));
            double tracev = 0.0;
            for (int k = 0; k < dim; ++k) tracev += gram.back()[k][k];
            l2.push_back(std::sqrt(std::max(tracev, 0.0)));
        }
    }

    // trapezoid up to node index `last` inclusive, plus the tail bound from
    // the decay envelope fitted on (0, t_last]
    MomentMatrix assemble(std::size_t last) const {
        MomentMatrix c;
        c.dim = dim;
        for (std::size_t i = 1; i <= last; ++i) {
            const double h = times[i] - times[i - 1];
            for (int k = 0; k < dim; ++k)
                for (int l = 0; l < dim; ++l)
                    c.entries[k][l] += 0.5 * h * (gram[i - 1][k][l] + gram[i][k][l]);
        }
        c.t_cut = times[last];
        for (int k = 0; k < dim; ++k) c.trace += c.entries[k][k];
        double kenv = 0.0;
        for (std::size_t i = 1; i <= last; ++i)
            kenv = std::max(kenv, std::pow(times[i], (dim + 2) / 4.0) * l2[i]);
        c.tail_bound = (2.0 / dim) * kenv * kenv * std::pow(c.t_cut, -0.5 * dim);
        return c;
    }
};

void horizon_gate(const MomentMatrix& c) {
    if (c.tail_bound > 1e-3 * c.frobenius() && c.frobenius() > 0.0)
        throw std::runtime_error(
            "moment_matrix: insufficient horizon, tail bound " + std::to_string(c.tail_bound) +
            " exceeds 1e-3 * ||c||_F = " + std::to_string(1e-3 * c.frobenius()));
}

std::size_t node_at_or_before(const Trajectory& tr, double t) {
    if (!(t > 0.0) || t > tr.tg.back() * (1.0 + 1e-12))
        throw std::invalid_argument("moment_matrix: trajectory does not extend to t_cut");
    std::size_t last = 0;
    for (std::size_t i = 0; i < tr.size(); ++i)
        if (tr.time(i) <= t * (1.0 + 1e-12)) last = i;
    return last;
}

}  // namespace

MomentMatrix moment_matrix(const Trajectory& tr, double t_cut) {
    GramSeries gs(tr);
    MomentMatrix c = gs.assemble(node_at_or_before(tr, t_cut));
    horizon_gate(c);
    return c;
}

double pick_t_cut(const Trajectory& tr) {
    const double cap = tr.grid.validity_t_max();
    GramSeries gs(tr);
    std::size_t cap_node = 0;
    for (std::size_t i = 1; i < tr.size(); ++i) {
        if (tr.time(i) > cap * (1.0 + 1e-12)) break;
        cap_node = i;
        MomentMatrix c = gs.assemble(i);
        if (c.frobenius() > 0.0 && c.tail_bound <= 1e-3 * c.frobenius()) return tr.time(i);
    }
    if (cap_node == 0) throw std::invalid_argument("pick_t_cut: no usable nodes inside the cap");
    MomentMatrix c = gs.assemble(cap_node);
    horizon_gate(c);  // throws with the insufficient-horizon message
    return tr.time(cap_node);
}

SynthForce build_force(const MomentMatrix& c, const ForceProfile& phi) {
    SynthForce f;
    f.profile = phi;
    for (int k = 0; k < c.dim; ++k)
        for (int l = 0; l < c.dim; ++l)
            f.coeffs[k][l] = (k == l) ? (c.entries[k][k] - c.trace) : c.entries[k][l];
    return f;
}

std::vector<double> functional_exponents(int dim) {
    return {1.0, 2.0, static_cast<double>(dim), 4.0 * dim / (3.0 + 2.0 * dim)};
}

Functionals functionals_from_norms(const NormReport& norms, int dim, const Calibration& calib) {
    const int n = dim;
    const double l1 = norms.lp_values.at(1.0);
    const double l2 = norms.lp_values.at(2.0);
    const double lint = norms.lp_values.at(4.0 * n / (3.0 + 2.0 * n));
    const double wmom = norms.weighted_first_moment;
    Functionals f;
    f.J = std::sqrt(l1) * std::sqrt(wmom) + lint * lint;
    const double core = std::pow(f.J, 4.0 / (n + 1)) * std::pow(l2, 2.0 * (n - 1) / (n + 1));
    f.K = wmom + core;
    f.L = calib.dim(n).gamma * core;
    return f;
}

Functionals functionals(const VectorField& a, const Calibration& calib) {
    NormReport norms = norms_and_moments(a, functional_exponents(a.grid.dim));
    return functionals_from_norms(norms, a.grid.dim, calib);
}

const SmallnessEntry& SmallnessReport::get(const std::string& name) const {
    for (const auto& e : entries)
        if (e.name == name) return e;
    throw std::out_of_range("SmallnessReport: no entry " + name);
}

SmallnessReport check_smallness(const VectorField& a, const ForceProfile& phi,
                                const Calibration& calib) {
    const int n = a.grid.dim;
    const CalibrationDim& cd = calib.dim(n);
    auto exps = functional_exponents(n);
    exps.push_back(2.0 * n);
    NormReport norms = norms_and_moments(a, exps);
    Functionals fn = functionals_from_norms(norms, n, calib);

    const double a_n = norms.lp_values.at(static_cast<double>(n));
    const double a_2 = norms.lp_values.at(2.0);
    const double a_1 = norms.lp_values.at(1.0);
    const double a_int = norms.lp_values.at(4.0 * n / (3.0 + 2.0 * n));
    const double wmom = norms.weighted_first_moment;
    const double L = fn.L;

    const double q_dual = 2.0 * n / (2.0 * n - 1.0);

    SmallnessReport rep;
    auto add = [&](const std::string& name, double lhs, double rhs) {
        SmallnessEntry e;
        e.name = name;
        e.lhs = lhs;
        e.rhs = rhs;
        e.pass = lhs <= rhs;
        e.margin = rhs != 0.0 ? (rhs - lhs) / rhs : (lhs == 0.0 ? 1.0 : -INFINITY);
        rep.entries.push_back(e);
    };

    add("S", a_n, cd.delta);
    add("S'",
        std::pow(a_n, 1.0 / n) *
            (std::pow(fn.J, 1.0 - 1.0 / n) + std::pow(a_2, 1.0 - 1.0 / n)),
        cd.delta_prime);
    add("A1", L * phi.sup_weighted_lp(0.75, 2.0 * n), a_n);
    add("A2", L * phi.sup_weighted_lp(0.5, static_cast<double>(n)), a_n);
    add("A3", M_PI * cd.c1 * L * phi.sup_weighted_lp(0.5, 2.0), a_2);
    add("A4", L * phi.sup_weighted_lp(7.0 / 8.0, 2.0), a_int);
    add("A5",
        L * (phi.integral_lp(q_dual) + phi.sup_weighted_lp((n + 3) / 4.0, 2.0)),
        std::sqrt(wmom) * std::sqrt(a_1));
    add("A6",
        (phi.sup_weighted_lp(0.5, 2.0, 1.0) + phi.integral_lp(q_dual) +
         phi.sup_weighted_lp((n + 3) / 4.0, 2.0)) *
            a_int,
        cd.delta_dblprime);

    rep.all_pass = true;
    for (const auto& e : rep.entries) rep.all_pass = rep.all_pass && e.pass;
    return rep;
}

ChooseRResult choose_R(const VectorField& a, const ProfileBase& base, const Calibration& calib) {
    const GridSpec& g = a.grid;
    const double r_max = (0.5 * g.length - 2.0 * g.dx()) / base.half_width;
    double R = 1.0;
    while (true) {
        ForceProfile phi = realize_profile(base, g, R);
        SmallnessReport rep = check_smallness(a, phi, calib);
        bool ok = true;
        double min_margin = INFINITY;
        std::string binding;
        for (const auto& e : rep.entries) {
            if (e.name == "S" || e.name == "S'") continue;  // R cannot fix data smallness
            if (e.margin < min_margin) {
                min_margin = e.margin;
                binding = e.name;
            }
            if (e.margin < 0.10) ok = false;
        }
        if (ok) {
            ChooseRResult res;
            res.profile = std::move(phi);
            res.R = R;
            res.binding_condition = binding;
            res.report = std::move(rep);
            return res;
        }
        R *= 2.0;
        if (R > r_max)
            throw std::runtime_error(
                "choose_R: required radius exceeds box capacity; need box length >= " +
                std::to_string(2.0 * (R * base.half_width + 2.0 * g.dx())) +
                " (current L = " + std::to_string(g.length) + ")");
    }
}

VectorField lambda_rescale(const VectorField& a, int lambda) {
    if (lambda < 1) throw std::invalid_argument("lambda_rescale: lambda must be a positive integer");
    if (lambda == 1) return a;
    const GridSpec& g = a.grid;
    const VectorField ap = to_physical(a);

    // resolution check: radius containing 99.9% of the L^2 mass must stay
    // above 8 cells after shrinking by lambda
    {
        std::vector<std::pair<double, double>> r2mass;
        r2mass.reserve(g.cells());
        double total = 0.0;
        for_each_point(g, [&](std::size_t i, const std::array<double, 3>& x) {
            double s = 0.0;
            for (int c = 0; c < g.dim; ++c) s += ap.phys[c][i] * ap.phys[c][i];
            double r2 = 0.0;
            for (int d = 0; d < g.dim; ++d) r2 += x[d] * x[d];
            r2mass.emplace_back(r2, s);
            total += s;
        });
        std::sort(r2mass.begin(), r2mass.end());
        double acc = 0.0, r_eff = 0.0;
        for (const auto& [r2, m] : r2mass) {
            acc += m;
            if (acc >= 0.999 * total) {
                r_eff = std::sqrt(r2);
                break;
            }
        }
        // support diameter 2 r_eff shrinks to 2 r_eff / lambda; keep >= 8 cells
        if (2.0 * r_eff / lambda < 8.0 * g.dx())
            throw std::runtime_error(
                "lambda_rescale: resolution loss, rescaled support falls below 8 cells");
    }

    VectorField out = VectorField::zeros(g, Rep::physical);
    const int N = g.points;
    const GridIndexer ix(g);
    // x_j = (j - N/2) dx, so lambda x_j is the grid point with index
    // lambda (j - N/2) + N/2 when it lies inside the box; outside the
    // preimage box the compressed field is zero (no periodic wrap, which
    // would tile lambda^n copies of the blob).
    auto map_index = [&](int j) {
        const long long m = static_cast<long long>(lambda) * (j - N / 2) + N / 2;
        return (m >= 0 && m < N) ? static_cast<int>(m) : -1;
    };
    std::array<int, 3> src{0, 0, 0};
    if (g.dim == 2) {
        for (int i0 = 0; i0 < N; ++i0) {
            src[0] = map_index(i0);
            if (src[0] < 0) continue;
            for (int i1 = 0; i1 < N; ++i1) {
                src[1] = map_index(i1);
                if (src[1] < 0) continue;
                const std::size_t di = static_cast<std::size_t>(i0) * N + i1;
                const std::size_t si = ix.phys(src);
                for (int c = 0; c < g.dim; ++c) out.phys[c][di] = lambda * ap.phys[c][si];
            }
        }
    } else {
        for (int i0 = 0; i0 < N; ++i0) {
            src[0] = map_index(i0);
            if (src[0] < 0) continue;
            for (int i1 = 0; i1 < N; ++i1) {
                src[1] = map_index(i1);
                if (src[1] < 0) continue;
                for (int i2 = 0; i2 < N; ++i2) {
                    src[2] = map_index(i2);
                    if (src[2] < 0) continue;
                    const std::size_t di = (static_cast<std::size_t>(i0) * N + i1) * N + i2;
                    for (int c = 0; c < g.dim; ++c)
                        out.phys[c][di] = lambda * ap.phys[c][ix.phys(src)];
                }
            }
        }
    }
    return out;
}

SynthesisState synthesize(const VectorField& a, const ForceProfile& phi, const TimeGrid& tg,
                          const SynthesisOptions& opts, const Calibration& calib) {
    if (!(opts.tol > 0.0)) throw std::invalid_argument("synthesize: tol must be > 0");
    if (opts.max_outer < 1) throw std::invalid_argument("synthesize: max_outer must be >= 1");
    SynthesisState st;
    st.smallness = check_smallness(a, phi, calib);
    if (!st.smallness.all_pass && !opts.override_smallness) {
        std::string failed;
        for (const auto& e : st.smallness.entries)
            if (!e.pass) failed += (failed.empty() ? "" : ", ") + e.name;
        throw std::runtime_error("synthesize: smallness conditions failed (" + failed +
                                 "); rescale the data or override explicitly");
    }

    // m = 0: unforced flow fixes the truncation horizon for the whole loop
    PicardResult p0 = picard_iterate(a, std::nullopt, opts.picard, tg);
    if (!p0.converged)
        throw std::runtime_error("synthesize: unforced solve did not contract: " + p0.message);
    st.t_cut = opts.t_cut > 0.0 ? opts.t_cut : pick_t_cut(p0.traj);
    MomentMatrix c_prev = moment_matrix(p0.traj, st.t_cut);
    st.c_history.push_back(c_prev);

    const double zero_floor = 1e-300;
    Trajectory flow = std::move(p0.traj);
    SynthForce f;
    int bad_streak = 0;

    for (int m = 1; m <= opts.max_outer; ++m) {
        f = build_force(c_prev, phi);
        PicardResult pm = picard_iterate(a, f, opts.picard, tg);
        if (!pm.converged)
            throw std::runtime_error("synthesize: forced solve at m=" + std::to_string(m) +
                                     " did not contract: " + pm.message);
        MomentMatrix c_cur = moment_matrix(pm.traj, st.t_cut);
        st.c_history.push_back(c_cur);
        st.iterations = m;

        double delta = 0.0;
        for (int k = 0; k < a.grid.dim; ++k)
            for (int l = 0; l < a.grid.dim; ++l) {
                const double d = c_cur.entries[k][l] - c_prev.entries[k][l];
                delta += d * d;
            }
        delta = std::sqrt(delta);
        st.delta_history.push_back(delta);
        if (st.delta_history.size() >= 2) {
            const double prev = st.delta_history[st.delta_history.size() - 2];
            if (prev > zero_floor) {
                const double ratio = delta / prev;
                st.ratio_history.push_back(ratio);
                bad_streak = (ratio >= 1.0) ? bad_streak + 1 : 0;
                if (bad_streak >= 3) {
                    st.diverged = true;
                    st.message = "synthesize: c-updates grew for 3 consecutive steps";
                    st.flow = std::move(pm.traj);
                    st.force = f;
                    return st;
                }
            }
        }

        flow = std::move(pm.traj);
        c_prev = c_cur;
        if (delta <= opts.tol * std::max(c_cur.frobenius(), zero_floor) ||
            (c_cur.frobenius() == 0.0 && delta == 0.0)) {
            st.converged = true;
            break;
        }
    }

    if (!st.converged && !st.diverged)
        st.message = "synthesize: tolerance not reached within max_outer iterations";
    st.force = f;
    st.flow = std::move(flow);
    return st;
}

}  // namespace nsforge
