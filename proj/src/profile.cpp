#include "nsforge/profile.hpp"

#include <cmath>
#include <stdexcept>

#include "nsforge/norms.hpp"

namespace nsforge {

namespace {

// C-infinity ramp: 0 at u<=0, 1 at u>=1.
double smooth_ramp(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double f0 = std::exp(-1.0 / u);
    const double f1 = std::exp(-1.0 / (1.0 - u));
    return f0 / (f0 + f1);
}

// 1 on |x| <= 0.7, smooth falloff to 0 at |x| = 1.
double bump1d(double x) {
    const double ax = std::abs(x);
    if (ax >= 1.0) return 0.0;
    if (ax <= 0.7) return 1.0;
    return smooth_ramp((1.0 - ax) / 0.3);
}

// flat-topped time window on [0, 1] with 20% ramps at both ends
double time_window(double tau) {
    if (tau <= 0.0 || tau >= 1.0) return 0.0;
    if (tau < 0.2) return smooth_ramp(tau / 0.2);
    if (tau > 0.8) return smooth_ramp((1.0 - tau) / 0.2);
    return 1.0;
}

}  // namespace

ProfileBase ProfileBase::builtin_bump(double M, double T0, int nt) {
    if (!(M > 0.0) || !(T0 > 0.0) || nt < 5)
        throw std::invalid_argument("builtin_bump: need M>0, T0>0, nt>=5");
    ProfileBase b;
    b.analytic = true;
    b.half_width = M;
    b.time_extent = T0;
    b.time_samples = nt;
    return b;
}

ProfileBase ProfileBase::from_samples(const GridSpec& g, std::vector<double> times,
                                      std::vector<std::vector<double>> slices, double M,
                                      double T0) {
    if (times.size() != slices.size() || times.size() < 5)
        throw std::invalid_argument("profile samples: need >= 5 slices with matching times");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("profile samples: times must increase");
    for (const auto& s : slices)
        if (s.size() != g.cells())
            throw std::invalid_argument("profile samples: slice size does not match grid");
    ProfileBase b;
    b.analytic = false;
    b.half_width = M;
    b.time_extent = T0;
    b.time_samples = static_cast<int>(times.size());
    b.sample_grid = g;
    b.times = std::move(times);
    b.slices = std::move(slices);
    return b;
}

double ProfileBase::eval(const std::array<double, 3>& x, double t, int dim) const {
    if (analytic) {
        if (t <= 0.0 || t >= time_extent) return 0.0;
        double v = time_window(t / time_extent);
        for (int d = 0; d < dim; ++d) v *= bump1d(x[d] / half_width);
        return v;
    }
    // sampled base: multilinear in space, linear in time
    if (t < times.front() || t > times.back()) return 0.0;
    std::size_t it = 0;
    while (it + 2 < times.size() && times[it + 1] < t) ++it;
    const double h = times[it + 1] - times[it];
    const double w1 = (t - times[it]) / h;

    auto interp_space = [&](const std::vector<double>& s) {
        const GridSpec& g = sample_grid;
        const int n = g.points;
        double frac[3];
        int i0[3];
        for (int d = 0; d < dim; ++d) {
            const double u = (x[d] + 0.5 * g.length) / g.dx();
            double fl = std::floor(u);
            i0[d] = static_cast<int>(fl);
            frac[d] = u - fl;
            if (i0[d] < 0 || i0[d] >= n) return 0.0;  // outside box
        }
        double acc = 0.0;
        const int corners = 1 << dim;
        for (int c = 0; c < corners; ++c) {
            double w = 1.0;
            std::array<int, 3> ii{0, 0, 0};
            bool ok = true;
            for (int d = 0; d < dim; ++d) {
                const int bit = (c >> d) & 1;
                ii[d] = i0[d] + bit;
                if (ii[d] >= n) { ok = false; break; }
                w *= bit ? frac[d] : (1.0 - frac[d]);
            }
            if (!ok || w == 0.0) continue;
            acc += w * s[GridIndexer(g).phys(ii)];
        }
        return acc;
    };

    return (1.0 - w1) * interp_space(slices[it]) + w1 * interp_space(slices[it + 1]);
}

ForceProfile realize_profile(const ProfileBase& base, const GridSpec& g, double R) {
    g.validate();
    if (!(R > 0.0)) throw std::invalid_argument("realize_profile: R must be positive");
    const double support = R * base.half_width;
    if (support > 0.5 * g.length - 2.0 * g.dx())
        throw std::runtime_error(
            "realize_profile: rescaled support " + std::to_string(2.0 * support) +
            " does not fit in the box (need L >= " +
            std::to_string(2.0 * support + 4.0 * g.dx()) + ")");
    if (2.0 * support < 4.0 * g.dx())
        throw std::runtime_error("realize_profile: support narrower than 4 grid cells");

    ForceProfile p;
    p.grid = g;
    p.base = base;
    p.radius = R;

    if (base.analytic) {
        p.times.resize(base.time_samples);
        for (int i = 0; i < base.time_samples; ++i)
            p.times[i] = base.time_extent * i / (base.time_samples - 1);
    } else {
        p.times = base.times;
    }
    if (p.times.size() < 5)
        throw std::runtime_error("realize_profile: support narrower than 4 time substeps");

    const double rn = std::pow(R, -g.dim);
    p.slices.reserve(p.times.size());
    for (double t : p.times) {
        std::vector<double> s(g.cells());
        for_each_point(g, [&](std::size_t i, const std::array<double, 3>& x) {
            std::array<double, 3> y{x[0] / R, x[1] / R, x[2] / R};
            s[i] = rn * base.eval(y, t, g.dim);
        });
        p.slices.push_back(std::move(s));
    }

    // normalize the grid space-time integral to exactly 1
    double l1 = 0.0, integ = 0.0;
    std::vector<double> space_int(p.times.size());
    for (std::size_t i = 0; i < p.times.size(); ++i) {
        space_int[i] = integral_scalar(g, p.slices[i]);
        l1 += lp_norm_scalar(g, p.slices[i], 1.0);
    }
    for (std::size_t i = 0; i + 1 < p.times.size(); ++i)
        integ += 0.5 * (space_int[i] + space_int[i + 1]) * (p.times[i + 1] - p.times[i]);
    if (std::abs(integ) <= 1e-8 * l1 * (p.times.back() - p.times.front()) || integ == 0.0)
        throw std::runtime_error(
            "realize_profile: degenerate profile, space-time integral vanishes "
            "(theorem hypothesis requires a nonzero integral)");
    p.normalization = integ;
    for (auto& s : p.slices)
        for (double& v : s) v /= integ;

    p.slices_spec.reserve(p.slices.size());
    for (const auto& s : p.slices) p.slices_spec.push_back(fft_forward(g, s));
    return p;
}

ForceProfile normalize_profile(const GridSpec& g, const std::vector<double>& times,
                               const std::vector<std::vector<double>>& raw_slices,
                               double half_width, double time_extent) {
    ProfileBase b = ProfileBase::from_samples(g, times, raw_slices, half_width, time_extent);
    return realize_profile(b, g, 1.0);
}

std::vector<cplx> ForceProfile::spectral_at(double s) const {
    std::vector<cplx> out(grid.spec_size(), cplx(0.0));
    if (s < times.front() || s > times.back()) return out;
    std::size_t it = 0;
    while (it + 2 < times.size() && times[it + 1] < s) ++it;
    const double h = times[it + 1] - times[it];
    const double w1 = (s - times[it]) / h;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = (1.0 - w1) * slices_spec[it][i] + w1 * slices_spec[it + 1][i];
    return out;
}

double ForceProfile::sup_weighted_lp(double alpha, double p, double s_below) const {
    double sup = 0.0;
    auto visit = [&](double s, const std::vector<double>& slice) {
        if (s <= 0.0 || s >= s_below) return;
        sup = std::max(sup, std::pow(s, alpha) * lp_norm_scalar(grid, slice, p));
    };
    for (std::size_t i = 0; i < times.size(); ++i) visit(times[i], slices[i]);
    // midpoints of the linear interpolant
    std::vector<double> mid(grid.cells());
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        for (std::size_t j = 0; j < mid.size(); ++j)
            mid[j] = 0.5 * (slices[i][j] + slices[i + 1][j]);
        visit(0.5 * (times[i] + times[i + 1]), mid);
    }
    return sup;
}

double ForceProfile::integral_lp(double p) const {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        const double n0 = lp_norm_scalar(grid, slices[i], p);
        const double n1 = lp_norm_scalar(grid, slices[i + 1], p);
        acc += 0.5 * (n0 + n1) * (times[i + 1] - times[i]);
    }
    return acc;
}

double ForceProfile::space_time_integral() const {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        const double s0 = integral_scalar(grid, slices[i]);
        const double s1 = integral_scalar(grid, slices[i + 1]);
        acc += 0.5 * (s0 + s1) * (times[i + 1] - times[i]);
    }
    return acc;
}

}  // namespace nsforge
