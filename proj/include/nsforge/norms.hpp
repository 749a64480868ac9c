#pragma once

#include <array>
#include <map>
#include <vector>

#include "nsforge/field.hpp"

namespace nsforge {

/// Norms and first moments of a localized field. `first_moments[k][j]` is
/// the signed integral of y_k a_j(y) dy with coordinates centered at the box
/// center; `weighted_first_moment` is the integral of |x| |a(x)| dx.
struct NormReport {
    std::map<double, double> lp_values;
    double weighted_first_moment = 0.0;
    std::array<std::array<double, 3>, 3> first_moments{};
    double boundary_band_fraction = 0.0;
};

/// L^p norm by trapezoidal quadrature (p = inf -> pointwise max of |u|).
/// |u| is the Euclidean magnitude across components.
double lp_norm(const VectorField& u, double p);

/// L^p norm of a scalar sample array on the grid.
double lp_norm_scalar(const GridSpec& g, const std::vector<double>& s, double p);

/// Trapezoidal integral of a scalar sample array (plain sum * cell volume on
/// the periodic grid).
double integral_scalar(const GridSpec& g, const std::vector<double>& s);

/// Fraction of the field's L^2 mass in the outer band (width L/16 per side).
double boundary_band_fraction(const VectorField& u);

/// Full report. Throws std::runtime_error when the boundary-band energy
/// fraction exceeds 1e-6 (data not contained in the box).
NormReport norms_and_moments(const VectorField& a, const std::vector<double>& exponents);

}  // namespace nsforge
