#pragma once

#include <functional>

#include "nsforge/field.hpp"

namespace nsforge {

/// Heat semigroup e^{t*Laplacian}: per-mode factor exp(-t|xi|^2).
/// Exact semigroup on the grid; t = 0 is the identity. Negative t rejected.
VectorField heat_propagate(const VectorField& u, double t);
TensorField heat_propagate(const TensorField& f, double t);

/// Leray projection: multiplier I - xi xi^T/|xi|^2 per mode. The xi = 0 mode
/// passes through unchanged (all in-scope data has zero mean). Output is
/// divergence-free to roundoff.
VectorField leray_project(const VectorField& u);

/// [div f]_j = sum_l d_l f_{jl}, evaluated spectrally. Nyquist planes are
/// zeroed (odd multiplier has no consistent sign there).
VectorField tensor_divergence(const TensorField& f);

/// The composite kernel F = e^{t*Laplacian} P div as a single multiplier
///   i xi_l (delta_{jk} - xi_j xi_k/|xi|^2) exp(-t|xi|^2)  acting on f_{kl}.
/// Requires t > 0.
VectorField apply_F(const TensorField& f, double t);

/// P div f without the heat factor (the Duhamel integrand's spatial part).
VectorField project_divergence(const TensorField& f);

/// Spectral gradient of a scalar sample array (test/diagnostic helper).
VectorField gradient(const GridSpec& g, const std::vector<double>& scalar_phys);

/// Scalar divergence field of u, physical representation.
std::vector<double> divergence_field(const VectorField& u);

/// max_x |div u(x)|.
double max_divergence(const VectorField& u);

/// Grid realization of the kernel with continuum Fourier transform m(xi):
/// samples of (1/L^n) sum_xi m(xi) e^{i xi.x} (the periodized kernel).
/// `multiplier` is evaluated on every r2c mode.
std::vector<double> kernel_field(const GridSpec& g,
                                 const std::function<cplx(const std::array<double, 3>&)>& multiplier);

/// Fields of the heat kernel E_t and its gradient components on the grid.
std::vector<double> heat_kernel_field(const GridSpec& g, double t);
VectorField heat_kernel_gradient(const GridSpec& g, double t);

/// F(.,t) contracted against constant weights w_{kl}:
/// component j = sum_{k,l} F_{lk,j}(.,t) w_{kl}. Used by the profile
/// residual diagnostics and the F-norm-law measurements.
VectorField F_kernel_contraction(const GridSpec& g, double t,
                                 const std::array<std::array<double, 3>, 3>& w);

/// L^p norm of the full kernel F(.,t) (Euclidean magnitude over all n^3
/// components). Obeys ||F(.,t)||_p = c_p t^{-(n+1)/2 + n/(2p)} inside the
/// validity window sqrt(t) in [8 dx, L/8].
///
/// With self_similar_radius = rho > 0 the quadrature is restricted to the
/// ball |x| <= rho sqrt(t). The kernel's slow |x|^{-(n+1)} tails make the
/// full-box L^1 of the periodized kernel lose mass linearly in sqrt(t)/L,
/// which buries the scaling exponent; the self-similarly truncated norm
/// obeys the exact same power law and is measurable on a desk-scale box.
/// L^2 and higher are tail-insensitive and fine on the full box.
double F_kernel_lp_norm(const GridSpec& g, double t, double p,
                        double self_similar_radius = 0.0);

}  // namespace nsforge
