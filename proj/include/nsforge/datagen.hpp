#pragma once

#include <cstdint>

#include "nsforge/field.hpp"

namespace nsforge {

struct DataParams {
    double amplitude = 0.02;
    double width = 0.4;        // Gaussian length scale sigma
    std::uint64_t seed = 0;    // random_solenoidal only
    int band_modes = 0;        // random potential band limit (0 -> N/8)
};

/// Divergence-free localized initial data families.
///
/// gaussian_vortex : 2D grad-perp of A e^{-r^2/sigma^2} (curl of a Gaussian
///                   potential in 3D); nonzero first moments.
/// moment_free     : stream/potential x_1 A e^{-r^2/sigma^2} (x_2 in 3D);
///                   all first moments vanish, generic second order, so the
///                   heat flow decays one power of sqrt(t) faster.
/// moment_free_xy  : stream/potential x_1 x_2 A e^{-r^2/sigma^2}; first
///                   moments vanish with an extra cancellation (decays one
///                   more half-power than moment_free).
/// random_solenoidal : curl of a band-limited random potential under a
///                   Gaussian envelope; seeded and bit-reproducible.
///
/// All kinds are constructed spectrally as curls, so the divergence vanishes
/// to roundoff, and are dealias-truncated at birth.
VectorField generate_data(const GridSpec& g, const std::string& kind, const DataParams& p);

}  // namespace nsforge
