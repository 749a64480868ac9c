#include "nsforge/trajectory.hpp"

#include <cmath>
#include <stdexcept>

#include "nsforge/norms.hpp"
#include "nsforge/spectral.hpp"

namespace nsforge {

const std::vector<double>& Trajectory::series(double p) const {
    auto it = norm_series.find(p);
    if (it == norm_series.end())
        throw std::out_of_range("Trajectory: norm series for requested p not computed");
    return it->second;
}

void Trajectory::finalize(std::vector<double> exponents) {
    if (snaps.size() != tg.nodes.size())
        throw std::logic_error("Trajectory: snapshot/node count mismatch");
    if (exponents.empty()) {
        exponents = {1.0, 2.0, static_cast<double>(grid.dim), 2.0 * grid.dim,
                     std::numeric_limits<double>::infinity()};
    }
    for (double p : exponents) norm_series[p] = std::vector<double>(snaps.size(), 0.0);
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        const VectorField up = to_physical(snaps[i]);
        for (double p : exponents) norm_series[p][i] = lp_norm(up, p);
    }
    const auto& l2 = norm_series.at(2.0);
    energy_integral.assign(snaps.size(), 0.0);
    for (std::size_t i = 1; i < snaps.size(); ++i) {
        const double h = tg.nodes[i] - tg.nodes[i - 1];
        energy_integral[i] =
            energy_integral[i - 1] + 0.5 * h * (l2[i] * l2[i] + l2[i - 1] * l2[i - 1]);
    }
}

double Trajectory::max_divergence_overall() const {
    double m = 0.0;
    for (const auto& s : snaps) m = std::max(m, max_divergence(s));
    return m;
}

KatoNormReport kato_norms(const Trajectory& tr) {
    KatoNormReport rep;
    const int n = tr.grid.dim;
    for (const auto& [p, series] : tr.norm_series) {
        if (std::isinf(p)) continue;
        double sup = 0.0;
        for (std::size_t i = 0; i < series.size(); ++i) {
            const double t = tr.time(i);
            if (t <= 0.0) continue;
            sup = std::max(sup, std::pow(t, 0.5 - n / (2.0 * p)) * series[i]);
        }
        rep.x_p_norms[p] = sup;
    }
    const auto& l2 = tr.series(2.0);
    for (std::size_t i = 0; i < l2.size(); ++i) {
        const double t = tr.time(i);
        rep.y_norm = std::max(rep.y_norm, std::pow(1.0 + t, (n + 1) / 4.0) * l2[i]);
        if (t > 0.0)
            rep.k_envelope = std::max(rep.k_envelope, std::pow(t, (n + 2) / 4.0) * l2[i]);
    }
    rep.l2time_integral = tr.energy_integral.empty() ? 0.0 : tr.energy_integral.back();
    const double t_end = tr.tg.back();
    if (t_end > 0.0)
        rep.l2time_tail_bound =
            (2.0 / n) * rep.k_envelope * rep.k_envelope * std::pow(t_end, -0.5 * n);
    return rep;
}

}  // namespace nsforge
