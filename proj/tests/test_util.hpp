#pragma once

#include <cmath>
#include <random>

#include "nsforge/datagen.hpp"
#include "nsforge/norms.hpp"
#include "nsforge/spectral.hpp"

namespace nsforge::test {

inline GridSpec grid2d(int n = 64, double L = 32.0) {
    GridSpec g;
    g.dim = 2;
    g.points = n;
    g.length = L;
    return g;
}

inline GridSpec grid3d(int n = 32, double L = 16.0) {
    GridSpec g;
    g.dim = 3;
    g.points = n;
    g.length = L;
    return g;
}

inline double rel_l2_diff(const VectorField& a, const VectorField& b) {
    VectorField d = axpy(-1.0, b, a);
    const double ref = lp_norm(a, 2.0);
    return ref > 0.0 ? lp_norm(d, 2.0) / ref : lp_norm(d, 2.0);
}

/// Smooth random vector field (not solenoidal): random low modes under a
/// Gaussian spectral envelope, deterministic per seed.
inline VectorField random_smooth_field(const GridSpec& g, std::uint64_t seed,
                                       double envelope_scale = 4.0) {
    std::mt19937_64 rng(seed);
    auto uniform = [&]() { return (rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
    VectorField u = VectorField::zeros(g, Rep::physical);
    for (int c = 0; c < g.dim; ++c)
        for (auto& v : u.phys[c]) v = uniform();
    VectorField us = to_spectral(u);
    const double k0 = 2.0 * M_PI / g.length * envelope_scale;
    for_each_mode(g, [&](std::size_t i, const std::array<double, 3>& xi,
                         const std::array<int, 3>&) {
        double k2 = 0.0;
        for (int d = 0; d < g.dim; ++d) k2 += xi[d] * xi[d];
        const double damp = std::exp(-k2 / (k0 * k0));
        for (int c = 0; c < g.dim; ++c) us.spec[c][i] *= damp;
    });
    return us;
}

/// Smooth random symmetric tensor field.
inline TensorField random_smooth_tensor(const GridSpec& g, std::uint64_t seed,
                                        double envelope_scale = 4.0) {
    TensorField t = TensorField::zeros(g, true, Rep::spectral);
    std::uint64_t s = seed;
    for (int k = 0; k < g.dim; ++k)
        for (int l = k; l < g.dim; ++l) {
            VectorField u = random_smooth_field(g, ++s, envelope_scale);
            t.comp_spec(k, l) = u.spec[0];
        }
    return t;
}

/// Localized scalar Gaussian A exp(-|x|^2/(2 sigma^2)) samples.
inline std::vector<double> gaussian_scalar(const GridSpec& g, double A, double sigma2x2) {
    std::vector<double> s(g.cells());
    for_each_point(g, [&](std::size_t i, const std::array<double, 3>& x) {
        double r2 = 0.0;
        for (int d = 0; d < g.dim; ++d) r2 += x[d] * x[d];
        s[i] = A * std::exp(-r2 / sigma2x2);
    });
    return s;
}

}  // namespace nsforge::test
