#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace nsforge {

/// Periodic computational box standing in for R^n.
///
/// The box is [-L/2, L/2)^n with N uniformly spaced points per axis.
/// Coordinates are centered: index N/2 sits exactly at the origin, so moment
/// integrals are taken about the box center. Wavenumbers are 2*pi*k/L for
/// signed k in [-N/2, N/2).
struct GridSpec {
    int dim = 2;                       // n in {2,3}
    int points = 256;                  // N per axis, power of two, >= 16
    double length = 64.0;              // L
    double dealias_fraction = 2.0 / 3.0;

    void validate() const;

    double dx() const { return length / points; }
    double cell_volume() const;
    std::size_t cells() const;         // N^dim
    std::size_t spec_size() const;     // N^(dim-1) * (N/2+1), r2c layout

    /// Physical coordinate of grid index i along one axis, in [-L/2, L/2).
    double coord(int i) const { return -0.5 * length + i * dx(); }

    /// Signed integer mode for unsigned index k along a full (non-halved) axis.
    int signed_mode(int k) const { return (k <= points / 2) ? k : k - points; }

    /// Wavenumber 2*pi*k/L for signed mode k.
    double wavenumber(int k_signed) const;

    double max_wavenumber() const { return wavenumber(points / 2); }

    /// Largest |k| kept by the dealias rule (2/3 rule by default).
    int dealias_mode_cut() const {
        return static_cast<int>(dealias_fraction * (points / 2.0) + 1e-12);
    }

    /// Upper edge of the algebraic-decay validity window: sqrt(t) <= L/8.
    double validity_t_max() const { return (length / 8.0) * (length / 8.0); }

    bool operator==(const GridSpec& o) const {
        return dim == o.dim && points == o.points && length == o.length &&
               dealias_fraction == o.dealias_fraction;
    }
};

/// Row-major index helpers. Physical arrays have extent N^dim; spectral
/// (r2c) arrays have extent N^(dim-1) * (N/2+1) with the last axis halved.
struct GridIndexer {
    explicit GridIndexer(const GridSpec& g)
        : dim(g.dim), n(g.points), nh(g.points / 2 + 1) {}

    int dim, n, nh;

    std::size_t phys(const std::array<int, 3>& i) const {
        std::size_t idx = 0;
        for (int d = 0; d < dim; ++d) idx = idx * n + i[d];
        return idx;
    }
    std::size_t spec(const std::array<int, 3>& k) const {
        std::size_t idx = 0;
        for (int d = 0; d < dim - 1; ++d) idx = idx * n + k[d];
        return idx * nh + k[dim - 1];
    }
};

}  // namespace nsforge
