#include "nsforge/solver.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "nsforge/norms.hpp"
#include "nsforge/spectral.hpp"

namespace nsforge {

namespace {

// Exact weights for int_{s0}^{s1} e^{-(s1-s)kappa} g(s) ds with g linear on
// the segment: integral = Wl*g(s0) + Wr*g(s1). Stable for kappa*h -> 0.
void exp_weights(double kappa, double h, double& damp, double& wl, double& wr) {
    const double x = kappa * h;
    damp = std::exp(-x);
    double a, b;  // a = (1-e^-x)/x, b = (1 - a)/x
    if (x < 1e-4) {
        a = 1.0 - x / 2.0 + x * x / 6.0 - x * x * x / 24.0;
        b = 0.5 - x / 6.0 + x * x / 24.0 - x * x * x / 120.0;
    } else {
        a = -std::expm1(-x) / x;
        b = (1.0 - a) / x;
    }
    wl = h * (a - b);
    wr = h * b;
}

double mode_k2(const GridSpec& g, const std::array<double, 3>& xi) {
    double k2 = 0.0;
    for (int d = 0; d < g.dim; ++d) k2 += xi[d] * xi[d];
    return k2;
}

// acc <- e^{-kappa h} acc  (semigroup advance of the accumulated integral)
void heat_advance(const GridSpec& g, std::vector<std::vector<cplx>>& acc, double h) {
    for_each_mode(g, [&](std::size_t i, const std::array<double, 3>& xi,
                         const std::array<int, 3>&) {
        const double damp = std::exp(-h * mode_k2(g, xi));
        for (auto& comp : acc) comp[i] *= damp;
    });
}

// acc += e^{-kappa (target - s1)} [Wl d0 + Wr d1] over segment [s0, s1]
void add_segment(const GridSpec& g, std::vector<std::vector<cplx>>& acc,
                 const std::vector<std::vector<cplx>>& d0,
                 const std::vector<std::vector<cplx>>& d1, double s0, double s1,
                 double target) {
    const double h = s1 - s0;
    if (!(h > 0.0)) return;
    const double tau = target - s1;
    for_each_mode(g, [&](std::size_t i, const std::array<double, 3>& xi,
                         const std::array<int, 3>&) {
        const double k2 = mode_k2(g, xi);
        double damp, wl, wr;
        exp_weights(k2, h, damp, wl, wr);
        const double outer = std::exp(-tau * k2);
        for (std::size_t c = 0; c < acc.size(); ++c)
            acc[c][i] += outer * (wl * d0[c][i] + wr * d1[c][i]);
    });
}

// Per-slice P div (C * phi) vectors for a separable force; linear-in-time
// interpolation between slices commutes with the (linear) spatial operator,
// so segment endpoints taken at slice breakpoints make the product
// integration exact for the stored profile.
class ForceIntegrand {
  public:
    ForceIntegrand(const SynthForce& f, const GridSpec& g) : grid_(g), times_(f.profile.times) {
        if (!(f.profile.grid == g))
            throw std::invalid_argument("duhamel_force: profile grid does not match");
        if (2.0 * f.profile.support_half_width() < 4.0 * g.dx())
            throw std::runtime_error("duhamel_force: profile support narrower than 4 grid cells");
        if (times_.size() < 5)
            throw std::runtime_error("duhamel_force: profile support narrower than 4 time substeps");
        const int n = g.dim;
        TensorField t = TensorField::zeros(g, true, Rep::spectral);
        dslices_.reserve(times_.size());
        for (std::size_t p = 0; p < times_.size(); ++p) {
            for (int k = 0; k < n; ++k)
                for (int l = k; l < n; ++l) {
                    auto& comp = t.comp_spec(k, l);
                    const auto& phi = f.profile.slices_spec[p];
                    const double c = f.coeffs[k][l];
                    for (std::size_t i = 0; i < comp.size(); ++i) comp[i] = c * phi[i];
                }
            dslices_.push_back(project_divergence(t).spec);
        }
    }

    double support_begin() const { return times_.front(); }
    double support_end() const { return times_.back(); }

    std::vector<std::vector<cplx>> at(double s) const {
        const int n = grid_.dim;
        std::vector<std::vector<cplx>> out(n, std::vector<cplx>(grid_.spec_size(), cplx(0.0)));
        if (s < times_.front() || s > times_.back()) return out;
        std::size_t it = 0;
        while (it + 2 < times_.size() && times_[it + 1] < s) ++it;
        const double w1 = (s - times_[it]) / (times_[it + 1] - times_[it]);
        for (int c = 0; c < n; ++c)
            for (std::size_t i = 0; i < out[c].size(); ++i)
                out[c][i] = (1.0 - w1) * dslices_[it][c][i] + w1 * dslices_[it + 1][c][i];
        return out;
    }

    // Accumulate the force part of the Duhamel integral over [ta, tb] into acc
    // (target node tb), splitting at profile breakpoints.
    void add_step(std::vector<std::vector<cplx>>& acc, double ta, double tb) const {
        double lo = std::max(ta, support_begin());
        double hi = std::min(tb, support_end());
        if (!(hi > lo)) return;
        std::vector<double> brk{lo};
        for (double t : times_)
            if (t > lo && t < hi) brk.push_back(t);
        brk.push_back(hi);
        for (std::size_t i = 0; i + 1 < brk.size(); ++i) {
            auto d0 = at(brk[i]);
            auto d1 = at(brk[i + 1]);
            add_segment(grid_, acc, d0, d1, brk[i], brk[i + 1], tb);
        }
    }

  private:
    GridSpec grid_;
    std::vector<double> times_;
    std::vector<std::vector<std::vector<cplx>>> dslices_;
};

VectorField wrap_spec(const GridSpec& g, std::vector<std::vector<cplx>> comps) {
    VectorField u;
    u.grid = g;
    u.rep = Rep::spectral;
    u.spec = std::move(comps);
    return u;
}

// -P div (u (x) v), dealiased product
std::vector<std::vector<cplx>> nonlinear_dvec(const VectorField& u, const VectorField& v) {
    TensorField t = outer_product(u, v, true);
    VectorField d = project_divergence(t);
    for (auto& comp : d.spec)
        for (auto& z : comp) z = -z;
    return std::move(d.spec);
}

VectorField heat_from(const VectorField& a_spec, double t) {
    VectorField v = a_spec;
    for_each_mode(v.grid, [&](std::size_t i, const std::array<double, 3>& xi,
                              const std::array<int, 3>&) {
        const double damp = std::exp(-t * mode_k2(v.grid, xi));
        for (int c = 0; c < v.ncomp(); ++c) v.spec[c][i] *= damp;
    });
    return v;
}

void check_solenoidal(const VectorField& a) {
    const double scale = max_abs(a);
    if (scale == 0.0) return;
    const double div = max_divergence(a);
    if (div > 1e-8 * scale * a.grid.max_wavenumber())
        throw std::invalid_argument("solver: initial data is not divergence-free");
}

double x2n_weighted_diff(const std::vector<VectorField>& u, const std::vector<VectorField>& v,
                         const TimeGrid& tg) {
    // X_{2n} weight t^{1/2 - n/(2*2n)} = t^{1/4} for every n
    double sup = 0.0;
    for (std::size_t i = 1; i < u.size(); ++i) {
        VectorField d = axpy(-1.0, v[i], u[i]);
        sup = std::max(sup, std::pow(tg.nodes[i], 0.25) * lp_norm(d, 2.0 * u[i].grid.dim));
    }
    return sup;
}

double x2n_norm_of(const std::vector<VectorField>& u, const TimeGrid& tg) {
    double sup = 0.0;
    for (std::size_t i = 1; i < u.size(); ++i)
        sup = std::max(sup, std::pow(tg.nodes[i], 0.25) * lp_norm(u[i], 2.0 * u[i].grid.dim));
    return sup;
}

}  // namespace

bool SynthForce::zero() const {
    for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
            if (coeffs[k][l] != 0.0) return false;
    return true;
}

std::vector<VectorField> duhamel_force(const SynthForce& f, const GridSpec& g,
                                       const TimeGrid& tg) {
    tg.validate();
    std::vector<VectorField> out;
    out.reserve(tg.size());
    if (f.zero()) {
        for (std::size_t i = 0; i < tg.size(); ++i) out.push_back(VectorField::zeros(g, Rep::spectral));
        return out;
    }
    ForceIntegrand fi(f, g);
    std::vector<std::vector<cplx>> acc(g.dim, std::vector<cplx>(g.spec_size(), cplx(0.0)));
    out.push_back(wrap_spec(g, acc));
    for (std::size_t i = 1; i < tg.size(); ++i) {
        const double ta = tg.nodes[i - 1], tb = tg.nodes[i];
        heat_advance(g, acc, tb - ta);
        fi.add_step(acc, ta, tb);
        out.push_back(wrap_spec(g, acc));
    }
    return out;
}

VectorField bilinear_G(const Trajectory& u, const Trajectory& v, double t) {
    if (!(u.grid == v.grid) || u.tg.nodes != v.tg.nodes)
        throw std::invalid_argument("bilinear_G: trajectories on mismatched grids");
    const GridSpec& g = u.grid;
    std::size_t target = u.tg.size();
    for (std::size_t i = 0; i < u.tg.size(); ++i)
        if (std::abs(u.tg.nodes[i] - t) <= 1e-12 * std::max(1.0, u.tg.back())) target = i;
    if (target == u.tg.size())
        throw std::invalid_argument("bilinear_G: t is not a node of the shared timegrid");

    std::vector<std::vector<cplx>> acc(g.dim, std::vector<cplx>(g.spec_size(), cplx(0.0)));
    if (target == 0) return wrap_spec(g, acc);
    auto d_prev = nonlinear_dvec(u.at(0), v.at(0));
    for (std::size_t i = 1; i <= target; ++i) {
        heat_advance(g, acc, u.tg.nodes[i] - u.tg.nodes[i - 1]);
        auto d_cur = nonlinear_dvec(u.at(i), v.at(i));
        add_segment(g, acc, d_prev, d_cur, u.tg.nodes[i - 1], u.tg.nodes[i], u.tg.nodes[i]);
        d_prev = std::move(d_cur);
    }
    return wrap_spec(g, acc);
}

PicardResult picard_iterate(const VectorField& a, const std::optional<SynthForce>& f,
                            const PicardConfig& cfg, const TimeGrid& tg) {
    tg.validate();
    if (!(cfg.tolerance > 0.0)) throw std::invalid_argument("picard: tolerance must be > 0");
    check_solenoidal(a);
    const GridSpec& g = a.grid;
    const VectorField as = to_spectral(a);

    // linear part: heat flow of a plus the (fixed) Duhamel force term
    std::vector<VectorField> lin;
    lin.reserve(tg.size());
    if (f && !f->zero()) {
        lin = duhamel_force(*f, g, tg);
        for (std::size_t i = 0; i < tg.size(); ++i)
            lin[i] = axpy(1.0, heat_from(as, tg.nodes[i]), lin[i]);
    } else {
        for (std::size_t i = 0; i < tg.size(); ++i) lin.push_back(heat_from(as, tg.nodes[i]));
    }

    PicardResult res;
    std::vector<VectorField> cur = lin;
    const double xnorm0 = x2n_norm_of(cur, tg);
    double prev_diff = -1.0;

    for (int k = 0; k < cfg.max_iterations; ++k) {
        // next_i = lin_i + G(cur, cur)_i, marched incrementally
        std::vector<VectorField> next;
        next.reserve(tg.size());
        std::vector<std::vector<cplx>> acc(g.dim, std::vector<cplx>(g.spec_size(), cplx(0.0)));
        next.push_back(lin[0]);
        auto d_prev = nonlinear_dvec(cur[0], cur[0]);
        for (std::size_t i = 1; i < tg.size(); ++i) {
            heat_advance(g, acc, tg.nodes[i] - tg.nodes[i - 1]);
            auto d_cur = nonlinear_dvec(cur[i], cur[i]);
            add_segment(g, acc, d_prev, d_cur, tg.nodes[i - 1], tg.nodes[i], tg.nodes[i]);
            d_prev = std::move(d_cur);
            next.push_back(axpy(1.0, wrap_spec(g, acc), lin[i]));
        }

        const double diff = x2n_weighted_diff(next, cur, tg);
        res.diff_history.push_back(diff);
        res.iterations = k + 1;
        const double xnorm = std::max(x2n_norm_of(next, tg), xnorm0);

        if (prev_diff > 1e-14 * std::max(xnorm, 1e-300)) {
            const double ratio = diff / prev_diff;
            res.ratio_history.push_back(ratio);
            if (ratio >= 1.0) res.contracted = false;
        }
        prev_diff = diff;
        cur = std::move(next);

        if (diff <= cfg.tolerance * std::max(xnorm, 1e-300)) {
            res.converged = true;
            break;
        }
        if (!std::isfinite(diff) || diff > 1e6 * std::max(xnorm0, 1e-300)) {
            res.contracted = false;
            res.message = "picard: iteration blew up (amplitude too large for contraction)";
            break;
        }
    }
    if (!res.converged) {
        res.contracted = false;
        if (res.message.empty())
            res.message =
                "picard: no contraction within max_iterations (smallness condition violated)";
    }

    res.traj.grid = g;
    res.traj.tg = tg;
    res.traj.snaps = std::move(cur);
    res.traj.finalize();
    return res;
}

Trajectory integrate(const VectorField& a, const std::optional<SynthForce>& f,
                     const TimeGrid& tg, bool nonlinearity) {
    tg.validate();
    check_solenoidal(a);
    const GridSpec& g = a.grid;
    const double ximax = g.max_wavenumber() * std::sqrt(static_cast<double>(g.dim));

    std::unique_ptr<ForceIntegrand> fi;
    if (f && !f->zero()) fi = std::make_unique<ForceIntegrand>(*f, g);

    Trajectory tr;
    tr.grid = g;
    tr.tg = tg;
    tr.snaps.reserve(tg.size());
    VectorField cur = to_spectral(a);
    tr.snaps.push_back(cur);

    for (std::size_t i = 1; i < tg.size(); ++i) {
        const double ta = tg.nodes[i - 1], tb = tg.nodes[i], h = tb - ta;
        if (nonlinearity) {
            const double courant = h * max_abs(cur) * ximax;
            if (courant > 1.0)
                throw std::runtime_error(
                    "integrate: product-resolution (CFL) failure at t=" + std::to_string(ta) +
                    ", h*|u|*|xi_max| = " + std::to_string(courant));
        }

        std::vector<std::vector<cplx>> base = heat_from(cur, h).spec;
        if (fi) fi->add_step(base, ta, tb);

        if (!nonlinearity) {
            cur = wrap_spec(g, base);
            tr.snaps.push_back(cur);
            continue;
        }

        auto d0 = nonlinear_dvec(cur, cur);
        // ETD1 predictor, then exponential-trapezoidal corrector
        std::vector<std::vector<cplx>> pred = base;
        for_each_mode(g, [&](std::size_t m, const std::array<double, 3>& xi,
                             const std::array<int, 3>&) {
            double damp, wl, wr;
            exp_weights(mode_k2(g, xi), h, damp, wl, wr);
            for (int c = 0; c < g.dim; ++c) pred[c][m] += (wl + wr) * d0[c][m];
        });
        VectorField predu = wrap_spec(g, std::move(pred));
        auto d1 = nonlinear_dvec(predu, predu);

        std::vector<std::vector<cplx>> nxt = std::move(base);
        for_each_mode(g, [&](std::size_t m, const std::array<double, 3>& xi,
                             const std::array<int, 3>&) {
            double damp, wl, wr;
            exp_weights(mode_k2(g, xi), h, damp, wl, wr);
            for (int c = 0; c < g.dim; ++c) nxt[c][m] += wl * d0[c][m] + wr * d1[c][m];
        });
        cur = wrap_spec(g, std::move(nxt));
        tr.snaps.push_back(cur);
    }
    tr.finalize();
    return tr;
}

Trajectory integrate_resume(const Trajectory& tr, const TimeGrid& extension,
                            bool nonlinearity) {
    if (tr.snaps.empty()) throw std::invalid_argument("integrate_resume: empty trajectory");
    extension.validate();
    const double t0 = tr.tg.back();
    // restart the autonomous flow from the last snapshot; extension nodes are
    // offsets from t0
    TimeGrid ext = extension;
    Trajectory add = integrate(tr.at(tr.size() - 1), std::nullopt, ext, nonlinearity);

    Trajectory out;
    out.grid = tr.grid;
    out.tg.kind = "resumed";
    out.tg.nodes = tr.tg.nodes;
    for (std::size_t i = 1; i < add.size(); ++i) out.tg.nodes.push_back(t0 + add.time(i));
    out.tg.t_end = out.tg.nodes.back();
    out.tg.steps = static_cast<int>(out.tg.nodes.size()) - 1;
    out.snaps = tr.snaps;
    for (std::size_t i = 1; i < add.size(); ++i) out.snaps.push_back(add.snaps[i]);
    out.finalize();
    return out;
}

}  // namespace nsforge
