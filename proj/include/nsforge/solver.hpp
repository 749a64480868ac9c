#pragma once

#include <optional>

#include "nsforge/profile.hpp"
#include "nsforge/trajectory.hpp"

namespace nsforge {

/// Separable forcing tensor f_{kl}(x,t) = C[k][l] * phi(x,t). All synthesized
/// forces have this shape; the space-time integral of f_{kl} equals C[k][l]
/// exactly because phi has unit grid integral.
struct SynthForce {
    std::array<std::array<double, 3>, 3> coeffs{};
    ForceProfile profile;

    bool zero() const;
};

struct PicardConfig {
    int max_iterations = 40;
    double tolerance = 1e-10;  // relative to the iterate's X_{2n} norm
};

struct PicardResult {
    Trajectory traj;
    std::vector<double> diff_history;   // X_{2n}-weighted successive differences
    std::vector<double> ratio_history;  // diff[k+1]/diff[k]
    bool converged = false;
    bool contracted = true;  // false when ratios reach >= 1 (smallness violation)
    int iterations = 0;
    std::string message;
};

/// Duhamel force term int_0^t e^{(t-s)Lap} P div f(s) ds at every node of the
/// grid, via product integration exact for the profile's piecewise-linear
/// time dependence. Output fields are divergence-free.
std::vector<VectorField> duhamel_force(const SynthForce& f, const GridSpec& g,
                                       const TimeGrid& tg);

/// G(u,v)(t) = -int_0^t e^{(t-s)Lap} P div (u (x) v)(s) ds at node time t.
/// u and v must share a timegrid containing t.
VectorField bilinear_G(const Trajectory& u, const Trajectory& v, double t);

/// Fujita-Kato Picard iteration over the Duhamel form on the whole timegrid:
/// u_{k+1} = e^{tLap}a + (force term) + G(u_k, u_k).
PicardResult picard_iterate(const VectorField& a, const std::optional<SynthForce>& f,
                            const PicardConfig& cfg, const TimeGrid& tg);

/// Second-order exponential-integrator marching (ETD2RK predictor-corrector)
/// of the same mild formulation. With nonlinearity off and f absent this
/// reproduces the heat flow exactly.
Trajectory integrate(const VectorField& a, const std::optional<SynthForce>& f,
                     const TimeGrid& tg, bool nonlinearity = true);

/// Extend a finished trajectory to later times with the marching integrator
/// (checkpoint resume). Only valid when any force support is already past.
Trajectory integrate_resume(const Trajectory& tr, const TimeGrid& extension,
                            bool nonlinearity = true);

}  // namespace nsforge
