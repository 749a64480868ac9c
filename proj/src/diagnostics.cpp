#include "nsforge/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

#include "nsforge/spectral.hpp"

namespace nsforge {

DecayReport decay_slope(const std::vector<std::pair<double, double>>& series, double t0,
                        double t1, const GridSpec& grid, const std::string& quantity) {
    if (!(t0 > 0.0) || !(t1 > t0))
        throw std::invalid_argument("decay_slope: need 0 < t0 < t1");
    const double cap = grid.validity_t_max();
    if (t1 > cap * (1.0 + 1e-12))
        throw std::invalid_argument(
            "decay_slope: window end " + std::to_string(t1) +
            " lies outside the validity region sqrt(t) <= L/8 (t <= " + std::to_string(cap) +
            "); the periodic box no longer mimics whole-space decay there");
    if (t1 < 10.0 * t0)
        throw std::invalid_argument(
            "decay_slope: window [" + std::to_string(t0) + ", " + std::to_string(t1) +
            "] spans less than one decade; refusing to fit");

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int m = 0;
    for (const auto& [t, v] : series) {
        if (t < t0 * (1.0 - 1e-12) || t > t1 * (1.0 + 1e-12)) continue;
        if (!(v > 0.0))
            throw std::invalid_argument("decay_slope: nonpositive value inside the fit window");
        const double x = std::log(t), y = std::log(v);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 3) throw std::invalid_argument("decay_slope: fewer than 3 points in the window");

    DecayReport rep;
    rep.quantity = quantity;
    rep.t0 = t0;
    rep.t1 = t1;
    rep.points = m;
    rep.window_valid = true;
    const double denom = m * sxx - sx * sx;
    rep.exponent = (m * sxy - sx * sy) / denom;
    rep.intercept = (sy - rep.exponent * sx) / m;
    double ss = 0.0;
    for (const auto& [t, v] : series) {
        if (t < t0 * (1.0 - 1e-12) || t > t1 * (1.0 + 1e-12)) continue;
        const double r = std::log(v) - (rep.intercept + rep.exponent * std::log(t));
        ss += r * r;
    }
    rep.residual = std::sqrt(ss / m);
    return rep;
}

MSReport ms_residual(const MomentMatrix& c_inf,
                     const std::array<std::array<double, 3>, 3>& force_integral,
                     double tolerance) {
    MSReport rep;
    rep.dim = c_inf.dim;
    rep.tolerance = tolerance;
    double tr = 0.0;
    for (int k = 0; k < rep.dim; ++k) {
        for (int l = 0; l < rep.dim; ++l)
            rep.beta[k][l] = c_inf.entries[k][l] - force_integral[k][l];
        tr += rep.beta[k][k];
    }
    rep.scalar_part = tr / rep.dim;
    double dev = 0.0;
    for (int k = 0; k < rep.dim; ++k)
        for (int l = 0; l < rep.dim; ++l) {
            const double d = rep.beta[k][l] - (k == l ? rep.scalar_part : 0.0);
            dev += d * d;
        }
    rep.deviation = std::sqrt(dev);
    rep.pass = rep.deviation <= tolerance * (1.0 + std::abs(tr));
    return rep;
}

ProfileResidualReport fm_profile_residual(
    const Trajectory& tr, const std::array<std::array<double, 3>, 3>& first_moments,
    const std::array<std::array<double, 3>, 3>& force_integral, const MomentMatrix& c,
    double q, const std::vector<double>& nodes) {
    const GridSpec& g = tr.grid;
    const int n = g.dim;
    ProfileResidualReport rep;
    rep.q = q;

    // weights on the F-kernel: c_{kl} - W_{kl} (nonlinear term minus force term)
    std::array<std::array<double, 3>, 3> w{};
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) w[k][l] = c.entries[k][l] - force_integral[k][l];

    for (double t : nodes) {
        std::size_t idx = tr.size();
        for (std::size_t i = 0; i < tr.size(); ++i)
            if (std::abs(tr.time(i) - t) <= 1e-12 * std::max(1.0, tr.tg.back())) idx = i;
        if (idx == tr.size())
            throw std::invalid_argument("fm_profile_residual: node not on the trajectory grid");
        if (!(t > 0.0)) continue;

        VectorField r = to_physical(tr.at(idx));
        const VectorField gradE = heat_kernel_gradient(g, t);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const double m = first_moments[k][j];
                if (m == 0.0) continue;
                for (std::size_t i = 0; i < r.phys[j].size(); ++i)
                    r.phys[j][i] += gradE.phys[k][i] * m;
            }
        const VectorField fterm = F_kernel_contraction(g, t, w);
        for (int j = 0; j < n; ++j)
            for (std::size_t i = 0; i < r.phys[j].size(); ++i)
                r.phys[j][i] += fterm.phys[j][i];

        const double weight = std::pow(t, 0.5 + 0.5 * n * (1.0 - 1.0 / q));
        rep.times.push_back(t);
        rep.weighted_residual.push_back(weight * lp_norm(r, q));
        rep.in_window.push_back(t <= g.validity_t_max() * (1.0 + 1e-12));
    }
    return rep;
}

double grad_e1_l2_norm(int dim) {
    // |grad E_1(x)|^2 = (r/2)^2 (4 pi)^{-n} e^{-r^2/2}; integrate radially.
    const int n = dim;
    const double surface = (n == 2) ? 2.0 * M_PI : 4.0 * M_PI;
    const double rmax = 16.0;
    const int m = 200000;
    const double h = rmax / m;
    double acc = 0.0;
    for (int i = 0; i <= m; ++i) {
        const double r = i * h;
        const double f = 0.25 * r * r * std::exp(-0.5 * r * r) * std::pow(r, n - 1);
        acc += (i == 0 || i == m) ? 0.5 * f : f;
    }
    acc *= h * surface * std::pow(4.0 * M_PI, -n);
    return std::sqrt(acc);
}

HeatMomentReport lemma_heat2_check(const VectorField& a, const std::vector<double>& nodes) {
    const GridSpec& g = a.grid;
    const int n = g.dim;
    HeatMomentReport rep;
    rep.grad_e1_l2 = grad_e1_l2_norm(n);
    NormReport norms = norms_and_moments(a, {1.0});
    rep.weighted_moment = norms.weighted_first_moment;
    const VectorField as = to_spectral(a);
    for (double t : nodes) {
        if (!(t > 0.0)) throw std::invalid_argument("lemma_heat2_check: nodes must be positive");
        const double lhs = lp_norm(heat_propagate(as, t), 2.0);
        const double rhs = std::pow(t, -(n + 2) / 4.0) * rep.grad_e1_l2 * rep.weighted_moment;
        rep.times.push_back(t);
        rep.lhs.push_back(lhs);
        rep.rhs.push_back(rhs);
        rep.ratio.push_back(rhs > 0.0 ? lhs / rhs : (lhs == 0.0 ? 0.0 : INFINITY));
        if (lhs > rhs * (1.0 + 1e-12) && !(lhs == 0.0 && rhs == 0.0)) rep.holds = false;
    }
    return rep;
}

WiegnerReport wiegner_check(const Trajectory& tr, const VectorField& a,
                            const Calibration& calib) {
    WiegnerReport rep;
    const int n = tr.grid.dim;
    const double a2 = lp_norm(a, 2.0);
    if (a2 == 0.0) return rep;  // vacuous pass, empty max = 0
    rep.k_functional = functionals(a, calib).K;
    const auto& l2 = tr.series(2.0);
    const double cap = tr.grid.validity_t_max();
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const double t = tr.time(i);
        if (t <= 0.0 || t > cap * (1.0 + 1e-12)) continue;
        const double envelope = std::min(a2, rep.k_functional * std::pow(t, -(n + 2) / 4.0));
        if (envelope <= 0.0) continue;
        rep.c_emp = std::max(rep.c_emp, l2[i] / envelope);
        ++rep.nodes_used;
    }
    rep.pass = std::isfinite(rep.c_emp);
    return rep;
}

}  // namespace nsforge
