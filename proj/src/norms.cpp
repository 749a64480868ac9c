#include "nsforge/norms.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace nsforge {

double lp_norm(const VectorField& u, double p) {
    const VectorField up = to_physical(u);
    const GridSpec& g = up.grid;
    const std::size_t npts = g.cells();
    if (std::isinf(p)) {
        return max_abs(up);
    }
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    double acc = 0.0;
    for (std::size_t i = 0; i < npts; ++i) {
        double s = 0.0;
        for (int c = 0; c < up.ncomp(); ++c) s += up.phys[c][i] * up.phys[c][i];
        acc += std::pow(s, 0.5 * p);
    }
    return std::pow(acc * g.cell_volume(), 1.0 / p);
}

double lp_norm_scalar(const GridSpec& g, const std::vector<double>& s, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : s) m = std::max(m, std::abs(v));
        return m;
    }
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm_scalar: p must be >= 1");
    double acc = 0.0;
    for (double v : s) acc += std::pow(std::abs(v), p);
    return std::pow(acc * g.cell_volume(), 1.0 / p);
}

double integral_scalar(const GridSpec& g, const std::vector<double>& s) {
    double acc = 0.0;
    for (double v : s) acc += v;
    return acc * g.cell_volume();
}

double boundary_band_fraction(const VectorField& u) {
    const VectorField up = to_physical(u);
    const GridSpec& g = up.grid;
    const double band = g.length / 16.0;
    const double edge = 0.5 * g.length - band;
    double total = 0.0, outer = 0.0;
    for_each_point(g, [&](std::size_t i, const std::array<double, 3>& x) {
        double s = 0.0;
        for (int c = 0; c < up.ncomp(); ++c) s += up.phys[c][i] * up.phys[c][i];
        total += s;
        for (int d = 0; d < g.dim; ++d) {
            if (std::abs(x[d]) >= edge) {
                outer += s;
                break;
            }
        }
    });
    return total > 0.0 ? outer / total : 0.0;
}

NormReport norms_and_moments(const VectorField& a, const std::vector<double>& exponents) {
    const VectorField ap = to_physical(a);
    const GridSpec& g = ap.grid;
    NormReport rep;

    rep.boundary_band_fraction = boundary_band_fraction(ap);
    if (rep.boundary_band_fraction > 1e-6)
        throw std::runtime_error(
            "norms_and_moments: boundary-band energy fraction " +
            std::to_string(rep.boundary_band_fraction) +
            " exceeds 1e-6 (data not contained in box)");

    for (double p : exponents) rep.lp_values[p] = lp_norm(ap, p);

    const double vol = g.cell_volume();
    double wmom = 0.0;
    std::array<std::array<double, 3>, 3> mom{};
    for_each_point(g, [&](std::size_t i, const std::array<double, 3>& x) {
        double s = 0.0;
        for (int c = 0; c < ap.ncomp(); ++c) s += ap.phys[c][i] * ap.phys[c][i];
        const double mag = std::sqrt(s);
        double r2 = 0.0;
        for (int d = 0; d < g.dim; ++d) r2 += x[d] * x[d];
        wmom += std::sqrt(r2) * mag;
        for (int k = 0; k < g.dim; ++k)
            for (int j = 0; j < g.dim; ++j) mom[k][j] += x[k] * ap.phys[j][i];
    });
    rep.weighted_first_moment = wmom * vol;
    for (auto& row : mom)
        for (double& v : row) v *= vol;
    rep.first_moments = mom;
    return rep;
}

}  // namespace nsforge
