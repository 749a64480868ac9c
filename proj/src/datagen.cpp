#include "nsforge/datagen.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "nsforge/norms.hpp"
#include "nsforge/spectral.hpp"

namespace nsforge {

namespace {

// a = grad-perp psi (2D) or curl (psi e_1) (3D), built in spectral space so
// div a = 0 exactly. Only the Nyquist planes are zeroed (no consistent sign
// for odd multipliers there); a 2/3-mask would spread truncation ringing over
// the box and break the localization checks for compact data.
VectorField curl_of_scalar(const GridSpec& g, const std::vector<double>& psi_phys) {
    auto psi = fft_forward(g, psi_phys);
    VectorField a = VectorField::zeros(g, Rep::spectral);
    const int half = g.points / 2;
    for_each_mode(g, [&](std::size_t i, const std::array<double, 3>& xi,
                         const std::array<int, 3>& ks) {
        for (int d = 0; d < g.dim; ++d)
            if (std::abs(ks[d]) == half) return;
        if (g.dim == 2) {
            a.spec[0][i] = cplx(0.0, -xi[1]) * psi[i];
            a.spec[1][i] = cplx(0.0, xi[0]) * psi[i];
        } else {
            // curl (psi, 0, 0) = (0, d3 psi, -d2 psi)
            a.spec[1][i] = cplx(0.0, xi[2]) * psi[i];
            a.spec[2][i] = cplx(0.0, -xi[1]) * psi[i];
        }
    });
    return a;
}

std::vector<double> sample_scalar(const GridSpec& g,
                                  const std::function<double(const std::array<double, 3>&)>& f) {
    std::vector<double> s(g.cells());
    for_each_point(g, [&](std::size_t i, const std::array<double, 3>& x) { s[i] = f(x); });
    return s;
}

double r2_of(const std::array<double, 3>& x, int dim) {
    double r2 = 0.0;
    for (int d = 0; d < dim; ++d) r2 += x[d] * x[d];
    return r2;
}

// Pinned-down normal sampler (Box-Muller over the raw mt19937_64 stream) so
// outputs are bit-identical across standard libraries.
class NormalSampler {
  public:
    explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}
    double operator()() {
        if (have_) {
            have_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

  private:
    double uniform() { return (rng_() >> 11) * 0x1.0p-53; }
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_ = false;
};

std::vector<double> random_band_limited(const GridSpec& g, NormalSampler& normal,
                                        int band_modes) {
    std::vector<double> white(g.cells());
    for (double& v : white) v = normal();
    auto spec = fft_forward(g, white);
    for_each_mode(g, [&](std::size_t i, const std::array<double, 3>&,
                         const std::array<int, 3>& ks) {
        for (int d = 0; d < g.dim; ++d)
            if (std::abs(ks[d]) > band_modes) {
                spec[i] = 0.0;
                return;
            }
    });
    return fft_backward(g, spec);
}

}  // namespace

VectorField generate_data(const GridSpec& g, const std::string& kind, const DataParams& p) {
    g.validate();
    static const std::array<std::string, 5> kinds{
        "zero", "gaussian_vortex", "moment_free", "moment_free_xy", "random_solenoidal"};
    if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end())
        throw std::invalid_argument("generate_data: unknown kind '" + kind + "'");
    if (kind == "zero") return VectorField::zeros(g, Rep::spectral);

    if (!(p.width > 0.0)) throw std::invalid_argument("generate_data: width must be positive");
    if (p.width < 1.2 * g.dx())
        throw std::runtime_error("generate_data: width " + std::to_string(p.width) +
                                 " is unresolvable on dx = " + std::to_string(g.dx()));
    const double s2 = p.width * p.width;

    if (kind == "gaussian_vortex") {
        auto psi = sample_scalar(g, [&](const std::array<double, 3>& x) {
            return p.amplitude * std::exp(-r2_of(x, g.dim) / s2);
        });
        return curl_of_scalar(g, psi);
    }
    if (kind == "moment_free") {
        const int axis = (g.dim == 2) ? 0 : 1;  // stream x_1 (2D) / potential x_2 (3D)
        auto psi = sample_scalar(g, [&](const std::array<double, 3>& x) {
            return p.amplitude * x[axis] * std::exp(-r2_of(x, g.dim) / s2);
        });
        return curl_of_scalar(g, psi);
    }
    if (kind == "moment_free_xy") {
        const int a0 = (g.dim == 2) ? 0 : 1, a1 = (g.dim == 2) ? 1 : 2;
        auto psi = sample_scalar(g, [&](const std::array<double, 3>& x) {
            return p.amplitude * x[a0] * x[a1] * std::exp(-r2_of(x, g.dim) / s2);
        });
        return curl_of_scalar(g, psi);
    }
    // random_solenoidal
    NormalSampler normal(p.seed ^ 0x9e3779b97f4a7c15ull);
    const int band = p.band_modes > 0 ? p.band_modes : g.points / 8;
    VectorField a = VectorField::zeros(g, Rep::spectral);
    if (g.dim == 2) {
        auto noise = random_band_limited(g, normal, band);
        auto psi = noise;
        for_each_point(g, [&](std::size_t i, const std::array<double, 3>& x) {
            psi[i] = noise[i] * std::exp(-r2_of(x, 2) / s2);
        });
        a = curl_of_scalar(g, psi);
    } else {
        // full curl of a random vector potential
        std::array<std::vector<cplx>, 3> pot;
        for (int c = 0; c < 3; ++c) {
            auto noise = random_band_limited(g, normal, band);
            std::vector<double> comp(g.cells());
            for_each_point(g, [&](std::size_t i, const std::array<double, 3>& x) {
                comp[i] = noise[i] * std::exp(-r2_of(x, 3) / s2);
            });
            pot[c] = fft_forward(g, comp);
        }
        const int half = g.points / 2;
        for_each_mode(g, [&](std::size_t i, const std::array<double, 3>& xi,
                             const std::array<int, 3>& ks) {
            for (int d = 0; d < 3; ++d)
                if (std::abs(ks[d]) == half) return;
            const cplx I(0.0, 1.0);
            a.spec[0][i] = I * (xi[1] * pot[2][i] - xi[2] * pot[1][i]);
            a.spec[1][i] = I * (xi[2] * pot[0][i] - xi[0] * pot[2][i]);
            a.spec[2][i] = I * (xi[0] * pot[1][i] - xi[1] * pot[0][i]);
        });
    }
    const double m = max_abs(a);
    if (m > 0.0) a = scale(p.amplitude / m, a);
    return a;
}

}  // namespace nsforge
