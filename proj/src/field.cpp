#include "nsforge/field.hpp"

#include <cmath>

namespace nsforge {

VectorField VectorField::zeros(const GridSpec& g, Rep r) {
    VectorField u;
    u.grid = g;
    u.rep = r;
    if (r == Rep::physical)
        u.phys.assign(g.dim, std::vector<double>(g.cells(), 0.0));
    else
        u.spec.assign(g.dim, std::vector<cplx>(g.spec_size(), cplx(0.0)));
    return u;
}

TensorField TensorField::zeros(const GridSpec& g, bool symmetric, Rep r) {
    TensorField f;
    f.grid = g;
    f.rep = r;
    f.symmetric = symmetric;
    const int count = f.storage_count();
    if (r == Rep::physical)
        f.phys.assign(count, std::vector<double>(g.cells(), 0.0));
    else
        f.spec.assign(count, std::vector<cplx>(g.spec_size(), cplx(0.0)));
    return f;
}

int TensorField::slot(int k, int l) const {
    const int n = grid.dim;
    if (!symmetric) return k * n + l;
    if (k > l) std::swap(k, l);
    // upper triangle, row-major: (0,0),(0,1),...,(1,1),...
    return k * n - k * (k - 1) / 2 + (l - k);
}

VectorField to_spectral(const VectorField& u) {
    if (u.rep == Rep::spectral) return u;
    VectorField v;
    v.grid = u.grid;
    v.rep = Rep::spectral;
    v.spec.reserve(u.phys.size());
    for (const auto& c : u.phys) v.spec.push_back(fft_forward(u.grid, c));
    return v;
}

VectorField to_physical(const VectorField& u) {
    if (u.rep == Rep::physical) return u;
    VectorField v;
    v.grid = u.grid;
    v.rep = Rep::physical;
    v.phys.reserve(u.spec.size());
    for (const auto& c : u.spec) v.phys.push_back(fft_backward(u.grid, c));
    return v;
}

TensorField to_spectral(const TensorField& f) {
    if (f.rep == Rep::spectral) return f;
    TensorField g;
    g.grid = f.grid;
    g.rep = Rep::spectral;
    g.symmetric = f.symmetric;
    g.spec.reserve(f.phys.size());
    for (const auto& c : f.phys) g.spec.push_back(fft_forward(f.grid, c));
    return g;
}

TensorField to_physical(const TensorField& f) {
    if (f.rep == Rep::physical) return f;
    TensorField g;
    g.grid = f.grid;
    g.rep = Rep::physical;
    g.symmetric = f.symmetric;
    g.phys.reserve(f.spec.size());
    for (const auto& c : f.spec) g.phys.push_back(fft_backward(f.grid, c));
    return g;
}

TensorField outer_product(const VectorField& u, const VectorField& v, bool dealias) {
    const bool same = (&u == &v);
    const VectorField up = to_physical(u);
    const VectorField vp = same ? up : to_physical(v);
    const GridSpec& g = u.grid;
    if (!(v.grid == g)) throw std::invalid_argument("outer_product: grid mismatch");

    TensorField t = TensorField::zeros(g, same, Rep::spectral);
    const std::size_t npts = g.cells();
    std::vector<double> prod(npts);
    const int n = g.dim;
    for (int k = 0; k < n; ++k) {
        for (int l = same ? k : 0; l < n; ++l) {
            for (std::size_t i = 0; i < npts; ++i) prod[i] = up.phys[k][i] * vp.phys[l][i];
            auto sp = fft_forward(g, prod);
            if (dealias) dealias_truncate(g, sp);
            t.comp_spec(k, l) = std::move(sp);
        }
    }
    return t;
}

VectorField axpy(double alpha, const VectorField& x, const VectorField& y) {
    if (!(x.grid == y.grid) || x.rep != y.rep)
        throw std::invalid_argument("axpy: incompatible fields");
    VectorField r = x;
    if (x.rep == Rep::physical) {
        for (int c = 0; c < x.ncomp(); ++c)
            for (std::size_t i = 0; i < r.phys[c].size(); ++i)
                r.phys[c][i] = alpha * x.phys[c][i] + y.phys[c][i];
    } else {
        for (int c = 0; c < x.ncomp(); ++c)
            for (std::size_t i = 0; i < r.spec[c].size(); ++i)
                r.spec[c][i] = alpha * x.spec[c][i] + y.spec[c][i];
    }
    return r;
}

VectorField scale(double alpha, const VectorField& x) {
    VectorField r = x;
    if (x.rep == Rep::physical) {
        for (auto& c : r.phys)
            for (double& v : c) v *= alpha;
    } else {
        for (auto& c : r.spec)
            for (cplx& v : c) v *= alpha;
    }
    return r;
}

double max_abs(const VectorField& u) {
    const VectorField up = to_physical(u);
    double m = 0.0;
    const std::size_t npts = up.grid.cells();
    for (std::size_t i = 0; i < npts; ++i) {
        double s = 0.0;
        for (int c = 0; c < up.ncomp(); ++c) s += up.phys[c][i] * up.phys[c][i];
        m = std::max(m, s);
    }
    return std::sqrt(m);
}

}  // namespace nsforge
