#pragma once

#include <complex>
#include <vector>

#include "nsforge/grid.hpp"

namespace nsforge {

using cplx = std::complex<double>;

/// Unnormalized r2c forward transform of one scalar component.
std::vector<cplx> fft_forward(const GridSpec& g, const std::vector<double>& phys);

/// Normalized c2r inverse transform (input is copied; FFTW c2r clobbers).
std::vector<double> fft_backward(const GridSpec& g, const std::vector<cplx>& spec);

/// Visit every r2c mode. fn(flat_index, xi[3], k_signed[3]) with xi the
/// wavenumber vector; entries beyond `dim` are zero. The last axis runs over
/// k in [0, N/2] only (Hermitian half-spectrum).
template <typename Fn>
void for_each_mode(const GridSpec& g, Fn&& fn) {
    const int n = g.points, nh = n / 2 + 1;
    std::array<int, 3> ks{0, 0, 0};
    std::array<double, 3> xi{0.0, 0.0, 0.0};
    std::size_t idx = 0;
    if (g.dim == 2) {
        for (int k0 = 0; k0 < n; ++k0) {
            ks[0] = g.signed_mode(k0);
            xi[0] = g.wavenumber(ks[0]);
            for (int k1 = 0; k1 < nh; ++k1, ++idx) {
                ks[1] = k1;
                xi[1] = g.wavenumber(k1);
                fn(idx, xi, ks);
            }
        }
    } else {
        for (int k0 = 0; k0 < n; ++k0) {
            ks[0] = g.signed_mode(k0);
            xi[0] = g.wavenumber(ks[0]);
            for (int k1 = 0; k1 < n; ++k1) {
                ks[1] = g.signed_mode(k1);
                xi[1] = g.wavenumber(ks[1]);
                for (int k2 = 0; k2 < nh; ++k2, ++idx) {
                    ks[2] = k2;
                    xi[2] = g.wavenumber(k2);
                    fn(idx, xi, ks);
                }
            }
        }
    }
}

/// Visit every physical grid point. fn(flat_index, x[3]) with centered
/// coordinates; entries beyond `dim` are zero.
template <typename Fn>
void for_each_point(const GridSpec& g, Fn&& fn) {
    const int n = g.points;
    std::array<double, 3> x{0.0, 0.0, 0.0};
    std::size_t idx = 0;
    if (g.dim == 2) {
        for (int i0 = 0; i0 < n; ++i0) {
            x[0] = g.coord(i0);
            for (int i1 = 0; i1 < n; ++i1, ++idx) {
                x[1] = g.coord(i1);
                fn(idx, x);
            }
        }
    } else {
        for (int i0 = 0; i0 < n; ++i0) {
            x[0] = g.coord(i0);
            for (int i1 = 0; i1 < n; ++i1) {
                x[1] = g.coord(i1);
                for (int i2 = 0; i2 < n; ++i2, ++idx) {
                    x[2] = g.coord(i2);
                    fn(idx, x);
                }
            }
        }
    }
}

/// True if the mode (by signed indices) survives the dealias truncation.
inline bool mode_kept(const GridSpec& g, const std::array<int, 3>& ks) {
    const int cut = g.dealias_mode_cut();
    for (int d = 0; d < g.dim; ++d)
        if (std::abs(ks[d]) > cut) return false;
    return true;
}

/// Zero all modes beyond the dealias cut (in place).
void dealias_truncate(const GridSpec& g, std::vector<cplx>& spec);

}  // namespace nsforge
