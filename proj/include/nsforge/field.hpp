#pragma once

#include <vector>

#include "nsforge/fft.hpp"
#include "nsforge/grid.hpp"

namespace nsforge {

enum class Rep { physical, spectral };

/// Velocity-type field: dim real components on the grid, stored either as
/// physical samples or as r2c spectra. Fields are value types; operations
/// return new fields rather than mutating.
struct VectorField {
    GridSpec grid;
    Rep rep = Rep::physical;
    std::vector<std::vector<double>> phys;  // [dim][N^dim]
    std::vector<std::vector<cplx>> spec;    // [dim][spec_size]

    static VectorField zeros(const GridSpec& g, Rep r = Rep::physical);
    int ncomp() const { return grid.dim; }
};

/// n x n tensor field (forces, u (x) u). When `symmetric` is set only the
/// upper triangle is stored and component(k,l) aliases component(l,k), so the
/// symmetry invariant holds exactly.
struct TensorField {
    GridSpec grid;
    Rep rep = Rep::physical;
    bool symmetric = true;
    std::vector<std::vector<double>> phys;
    std::vector<std::vector<cplx>> spec;

    static TensorField zeros(const GridSpec& g, bool symmetric, Rep r = Rep::physical);

    int storage_count() const {
        const int n = grid.dim;
        return symmetric ? n * (n + 1) / 2 : n * n;
    }
    /// Storage slot of component (k,l).
    int slot(int k, int l) const;

    std::vector<double>& comp_phys(int k, int l) { return phys[slot(k, l)]; }
    const std::vector<double>& comp_phys(int k, int l) const { return phys[slot(k, l)]; }
    std::vector<cplx>& comp_spec(int k, int l) { return spec[slot(k, l)]; }
    const std::vector<cplx>& comp_spec(int k, int l) const { return spec[slot(k, l)]; }
};

VectorField to_spectral(const VectorField& u);
VectorField to_physical(const VectorField& u);
TensorField to_spectral(const TensorField& f);
TensorField to_physical(const TensorField& f);

/// Pointwise outer product (u (x) v)_{kl} = u_k v_l, dealiased after the
/// forward transform when `dealias` is set. Symmetric storage when u and v
/// are the same field.
TensorField outer_product(const VectorField& u, const VectorField& v, bool dealias = true);

VectorField axpy(double alpha, const VectorField& x, const VectorField& y);  // alpha*x + y
VectorField scale(double alpha, const VectorField& x);

double max_abs(const VectorField& u);  // max over points of |u(x)| (Euclidean)

}  // namespace nsforge
