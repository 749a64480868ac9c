#include "nsforge/spectral.hpp"

#include <cmath>
#include <functional>

namespace nsforge {

namespace {

bool nyquist_mode(const GridSpec& g, const std::array<int, 3>& ks) {
    for (int d = 0; d < g.dim; ++d)
        if (std::abs(ks[d]) == g.points / 2) return true;
    return false;
}

void check_time_nonneg(double t, const char* who) {
    if (!(t >= 0.0)) throw std::invalid_argument(std::string(who) + ": t must be >= 0");
}

}  // namespace

VectorField heat_propagate(const VectorField& u, double t) {
    check_time_nonneg(t, "heat_propagate");
    VectorField v = to_spectral(u);
    for_each_mode(v.grid, [&](std::size_t i, const std::array<double, 3>& xi,
                              const std::array<int, 3>&) {
        double k2 = 0.0;
        for (int d = 0; d < v.grid.dim; ++d) k2 += xi[d] * xi[d];
        const double damp = std::exp(-t * k2);
        for (int c = 0; c < v.ncomp(); ++c) v.spec[c][i] *= damp;
    });
    return v;
}

TensorField heat_propagate(const TensorField& f, double t) {
    check_time_nonneg(t, "heat_propagate");
    TensorField v = to_spectral(f);
    for_each_mode(v.grid, [&](std::size_t i, const std::array<double, 3>& xi,
                              const std::array<int, 3>&) {
        double k2 = 0.0;
        for (int d = 0; d < v.grid.dim; ++d) k2 += xi[d] * xi[d];
        const double damp = std::exp(-t * k2);
        for (auto& comp : v.spec) comp[i] *= damp;
    });
    return v;
}

VectorField leray_project(const VectorField& u) {
    VectorField v = to_spectral(u);
    const int n = v.grid.dim;
    for_each_mode(v.grid, [&](std::size_t i, const std::array<double, 3>& xi,
                              const std::array<int, 3>& ks) {
        // the mixed xi_j xi_k couplings cannot be represented consistently on
        // the Hermitian half-spectrum at the Nyquist planes; zero them like
        // the other component-mixing multipliers
        if (nyquist_mode(v.grid, ks)) {
            for (int d = 0; d < n; ++d) v.spec[d][i] = 0.0;
            return;
        }
        double k2 = 0.0;
        for (int d = 0; d < n; ++d) k2 += xi[d] * xi[d];
        if (k2 == 0.0) return;  // mean mode passes through
        cplx dot(0.0);
        for (int d = 0; d < n; ++d) dot += xi[d] * v.spec[d][i];
        dot /= k2;
        for (int d = 0; d < n; ++d) v.spec[d][i] -= xi[d] * dot;
    });
    return v;
}

VectorField tensor_divergence(const TensorField& f) {
    TensorField fs = to_spectral(f);
    const GridSpec& g = fs.grid;
    VectorField out = VectorField::zeros(g, Rep::spectral);
    for_each_mode(g, [&](std::size_t i, const std::array<double, 3>& xi,
                         const std::array<int, 3>& ks) {
        if (nyquist_mode(g, ks)) return;
        for (int j = 0; j < g.dim; ++j) {
            cplx acc(0.0);
            for (int l = 0; l < g.dim; ++l) acc += xi[l] * fs.comp_spec(j, l)[i];
            out.spec[j][i] = cplx(0.0, 1.0) * acc;
        }
    });
    return out;
}

VectorField apply_F(const TensorField& f, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("apply_F: t must be > 0");
    TensorField fs = to_spectral(f);
    const GridSpec& g = fs.grid;
    const int n = g.dim;
    VectorField out = VectorField::zeros(g, Rep::spectral);
    for_each_mode(g, [&](std::size_t i, const std::array<double, 3>& xi,
                         const std::array<int, 3>& ks) {
        if (nyquist_mode(g, ks)) return;
        double k2 = 0.0;
        for (int d = 0; d < n; ++d) k2 += xi[d] * xi[d];
        if (k2 == 0.0) return;
        const double damp = std::exp(-t * k2);
        // div first: d_j = i xi_l f_{jl}; then project; then heat.
        cplx dvec[3];
        for (int j = 0; j < n; ++j) {
            cplx acc(0.0);
            for (int l = 0; l < n; ++l) acc += xi[l] * fs.comp_spec(j, l)[i];
            dvec[j] = cplx(0.0, 1.0) * acc;
        }
        cplx dot(0.0);
        for (int d = 0; d < n; ++d) dot += xi[d] * dvec[d];
        dot /= k2;
        for (int j = 0; j < n; ++j) out.spec[j][i] = (dvec[j] - xi[j] * dot) * damp;
    });
    return out;
}

VectorField project_divergence(const TensorField& f) {
    TensorField fs = to_spectral(f);
    const GridSpec& g = fs.grid;
    const int n = g.dim;
    VectorField out = VectorField::zeros(g, Rep::spectral);
    for_each_mode(g, [&](std::size_t i, const std::array<double, 3>& xi,
                         const std::array<int, 3>& ks) {
        if (nyquist_mode(g, ks)) return;
        double k2 = 0.0;
        for (int d = 0; d < n; ++d) k2 += xi[d] * xi[d];
        if (k2 == 0.0) return;
        cplx dvec[3];
        for (int j = 0; j < n; ++j) {
            cplx acc(0.0);
            for (int l = 0; l < n; ++l) acc += xi[l] * fs.comp_spec(j, l)[i];
            dvec[j] = cplx(0.0, 1.0) * acc;
        }
        cplx dot(0.0);
        for (int d = 0; d < n; ++d) dot += xi[d] * dvec[d];
        dot /= k2;
        for (int j = 0; j < n; ++j) out.spec[j][i] = dvec[j] - xi[j] * dot;
    });
    return out;
}

VectorField gradient(const GridSpec& g, const std::vector<double>& scalar_phys) {
    auto sp = fft_forward(g, scalar_phys);
    VectorField out = VectorField::zeros(g, Rep::spectral);
    for_each_mode(g, [&](std::size_t i, const std::array<double, 3>& xi,
                         const std::array<int, 3>& ks) {
        if (nyquist_mode(g, ks)) return;
        for (int d = 0; d < g.dim; ++d) out.spec[d][i] = cplx(0.0, 1.0) * xi[d] * sp[i];
    });
    return out;
}

std::vector<double> divergence_field(const VectorField& u) {
    VectorField us = to_spectral(u);
    const GridSpec& g = us.grid;
    std::vector<cplx> div(g.spec_size(), cplx(0.0));
    for_each_mode(g, [&](std::size_t i, const std::array<double, 3>& xi,
                         const std::array<int, 3>& ks) {
        if (nyquist_mode(g, ks)) return;
        cplx acc(0.0);
        for (int d = 0; d < g.dim; ++d) acc += xi[d] * us.spec[d][i];
        div[i] = cplx(0.0, 1.0) * acc;
    });
    return fft_backward(g, div);
}

double max_divergence(const VectorField& u) {
    auto div = divergence_field(u);
    double m = 0.0;
    for (double v : div) m = std::max(m, std::abs(v));
    return m;
}

std::vector<double> kernel_field(const GridSpec& g,
                                 const std::function<cplx(const std::array<double, 3>&)>& multiplier) {
    // Periodized kernel: samples (1/L^n) sum_xi m(xi) e^{i xi.x}. The origin is
    // the grid point at index N/2 per axis; with x_j = -L/2 + j dx this needs
    // the checkerboard phase (-1)^{k0+k1+...} folded into the coefficients.
    std::vector<cplx> spec(g.spec_size());
    double voln = 1.0;
    for (int d = 0; d < g.dim; ++d) voln *= g.length;
    for_each_mode(g, [&](std::size_t i, const std::array<double, 3>& xi,
                         const std::array<int, 3>& ks) {
        int ksum = 0;
        for (int d = 0; d < g.dim; ++d) ksum += ks[d];
        const double sign = (ksum & 1) ? -1.0 : 1.0;
        spec[i] = multiplier(xi) * (sign / voln);
    });
    // fft_backward divides by N^n; undo it (the sum over modes is unnormalized).
    auto out = fft_backward(g, spec);
    const double npts = static_cast<double>(g.cells());
    for (double& v : out) v *= npts;
    return out;
}

std::vector<double> heat_kernel_field(const GridSpec& g, double t) {
    check_time_nonneg(t, "heat_kernel_field");
    return kernel_field(g, [&](const std::array<double, 3>& xi) {
        double k2 = 0.0;
        for (int d = 0; d < g.dim; ++d) k2 += xi[d] * xi[d];
        return cplx(std::exp(-t * k2), 0.0);
    });
}

VectorField heat_kernel_gradient(const GridSpec& g, double t) {
    VectorField out = VectorField::zeros(g, Rep::physical);
    for (int d = 0; d < g.dim; ++d) {
        out.phys[d] = kernel_field(g, [&](const std::array<double, 3>& xi) {
            double k2 = 0.0;
            for (int e = 0; e < g.dim; ++e) k2 += xi[e] * xi[e];
            return cplx(0.0, xi[d]) * std::exp(-t * k2);
        });
    }
    return out;
}

double F_kernel_lp_norm(const GridSpec& g, double t, double p, double self_similar_radius) {
    if (!(t > 0.0)) throw std::invalid_argument("F_kernel_lp_norm: t must be > 0");
    const int n = g.dim;
    std::vector<double> mag2(g.cells(), 0.0);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            std::array<std::array<double, 3>, 3> w{};
            w[k][l] = 1.0;
            VectorField comp = F_kernel_contraction(g, t, w);
            for (int j = 0; j < n; ++j)
                for (std::size_t i = 0; i < mag2.size(); ++i)
                    mag2[i] += comp.phys[j][i] * comp.phys[j][i];
        }
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : mag2) m = std::max(m, v);
        return std::sqrt(m);
    }
    double acc = 0.0;
    if (self_similar_radius > 0.0) {
        const double r2max = self_similar_radius * self_similar_radius * t;
        if (r2max > 0.25 * g.length * g.length)
            throw std::invalid_argument(
                "F_kernel_lp_norm: self-similar ball does not fit in the box at this t");
        for_each_point(g, [&](std::size_t i, const std::array<double, 3>& x) {
            double r2 = 0.0;
            for (int d = 0; d < n; ++d) r2 += x[d] * x[d];
            if (r2 <= r2max) acc += std::pow(mag2[i], 0.5 * p);
        });
    } else {
        for (double v : mag2) acc += std::pow(v, 0.5 * p);
    }
    return std::pow(acc * g.cell_volume(), 1.0 / p);
}

VectorField F_kernel_contraction(const GridSpec& g, double t,
                                 const std::array<std::array<double, 3>, 3>& w) {
    if (!(t > 0.0)) throw std::invalid_argument("F_kernel_contraction: t must be > 0");
    const int n = g.dim;
    VectorField out = VectorField::zeros(g, Rep::physical);
    for (int j = 0; j < n; ++j) {
        out.phys[j] = kernel_field(g, [&](const std::array<double, 3>& xi) {
            double k2 = 0.0;
            for (int d = 0; d < n; ++d) k2 += xi[d] * xi[d];
            if (k2 == 0.0) return cplx(0.0);
            const double damp = std::exp(-t * k2);
            cplx acc(0.0);
            for (int k = 0; k < n; ++k) {
                const double proj_jk = (j == k ? 1.0 : 0.0) - xi[j] * xi[k] / k2;
                for (int l = 0; l < n; ++l)
                    acc += w[k][l] * cplx(0.0, xi[l]) * proj_jk;
            }
            return acc * damp;
        });
    }
    return out;
}

}  // namespace nsforge
