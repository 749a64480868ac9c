#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "nsforge/field.hpp"

namespace nsforge {

/// Underlying profile shape Phi before spatial rescaling: either the builtin
/// analytic bump or user-supplied samples on the simulation grid.
struct ProfileBase {
    bool analytic = true;
    double half_width = 1.0;   // M: support is [-M, M]^n
    double time_extent = 0.25; // T0: support is [0, T0] in time
    int time_samples = 33;     // slice count for analytic realization

    // sampled base (user profiles); slices live on `sample_grid`
    GridSpec sample_grid;
    std::vector<double> times;
    std::vector<std::vector<double>> slices;

    /// Indicator-like smooth bump on [-M, M]^n x [0, T0].
    static ProfileBase builtin_bump(double M = 1.0, double T0 = 0.25, int nt = 33);

    /// User-supplied raw samples Psi (no normalization applied here).
    static ProfileBase from_samples(const GridSpec& g, std::vector<double> times,
                                    std::vector<std::vector<double>> slices, double M,
                                    double T0);

    /// Point evaluation of Phi (multilinear interpolation for sampled bases).
    double eval(const std::array<double, 3>& x, double t, int dim) const;
};

/// Realized profile phi(x,t) = R^{-n} Phi(x/R, t) on the simulation grid,
/// normalized so the grid quadrature of the space-time integral is exactly 1.
struct ForceProfile {
    GridSpec grid;
    ProfileBase base;
    double radius = 1.0;        // R
    double normalization = 1.0; // raw integral of R^{-n} Phi(./R, .) before normalizing
    std::vector<double> times;
    std::vector<std::vector<double>> slices;     // physical scalar, normalized
    std::vector<std::vector<cplx>> slices_spec;  // spectra of the same slices

    double support_half_width() const { return radius * base.half_width; }
    double time_extent() const { return base.time_extent; }

    /// Spectral slice at arbitrary s (linear in time, zero outside support).
    std::vector<cplx> spectral_at(double s) const;

    /// sup over sampled times (slice nodes and midpoints) of s^alpha * ||phi(s)||_p,
    /// restricted to s < s_below when given.
    double sup_weighted_lp(double alpha, double p,
                           double s_below = std::numeric_limits<double>::infinity()) const;

    /// Time integral of ||phi(s)||_p (trapezoid over slices).
    double integral_lp(double p) const;

    /// Grid space-time integral (equals 1 after normalization).
    double space_time_integral() const;
};

/// Sample phi = R^{-n} Phi(./R, .) on grid g and normalize its grid integral
/// to 1. Throws when the rescaled support does not fit in the box or when the
/// raw integral degenerates (|integral| <= 1e-8 * L1 mass).
ForceProfile realize_profile(const ProfileBase& base, const GridSpec& g, double R);

/// The spec's normalize_profile: wrap raw samples Psi, check the nondegeneracy
/// hypothesis, and realize at R = 1.
ForceProfile normalize_profile(const GridSpec& g, const std::vector<double>& times,
                               const std::vector<std::vector<double>>& raw_slices,
                               double half_width, double time_extent);

}  // namespace nsforge
