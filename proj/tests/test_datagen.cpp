#include <doctest.h>

#include "test_util.hpp"

using namespace nsforge;
using namespace nsforge::test;

TEST_CASE("all generator kinds are divergence-free to roundoff") {
    for (const GridSpec& g : {grid2d(64, 32.0), grid3d(32, 16.0)}) {
        for (const char* kind :
             {"gaussian_vortex", "moment_free", "moment_free_xy", "random_solenoidal"}) {
            VectorField a = generate_data(g, kind, {0.5, 1.0, 7, 0});
            const double scale = max_abs(a) * g.max_wavenumber();
            CHECK_MESSAGE(max_divergence(a) < 1e-12 * scale, kind);
        }
    }
}

TEST_CASE("moment_free kinds: every first moment vanishes") {
    // widths resolved well enough that the zeroed Nyquist planes carry nothing
    for (const GridSpec& g : {grid2d(128, 32.0), grid3d(64, 16.0)}) {
        for (const char* kind : {"moment_free", "moment_free_xy"}) {
            VectorField a = generate_data(g, kind, {0.8, 1.0, 0, 0});
            NormReport rep = norms_and_moments(a, {1.0});
            const double bound = 1e-8 * rep.lp_values.at(1.0) * 1.0;
            for (int k = 0; k < g.dim; ++k)
                for (int j = 0; j < g.dim; ++j)
                    CHECK_MESSAGE(std::abs(rep.first_moments[k][j]) < bound,
                                  kind << " m[" << k << "][" << j << "]");
        }
    }
}

TEST_CASE("gaussian vortex has nonvanishing first moments") {
    const GridSpec g = grid3d(32, 16.0);
    VectorField a = generate_data(g, "gaussian_vortex", {0.5, 1.0, 0, 0});
    NormReport rep = norms_and_moments(a, {1.0});
    double maxmom = 0.0;
    for (int k = 0; k < 3; ++k)
        for (int j = 0; j < 3; ++j) maxmom = std::max(maxmom, std::abs(rep.first_moments[k][j]));
    CHECK(maxmom > 0.1);
}

TEST_CASE("random_solenoidal is bit-identical for a fixed seed") {
    const GridSpec g = grid2d(64, 32.0);
    VectorField a = generate_data(g, "random_solenoidal", {0.3, 2.0, 1234, 0});
    VectorField b = generate_data(g, "random_solenoidal", {0.3, 2.0, 1234, 0});
    VectorField c = generate_data(g, "random_solenoidal", {0.3, 2.0, 99, 0});
    const VectorField ap = to_physical(a), bp = to_physical(b), cp = to_physical(c);
    bool identical = true, differs = false;
    for (int comp = 0; comp < 2; ++comp)
        for (std::size_t i = 0; i < ap.phys[comp].size(); ++i) {
            identical = identical && (ap.phys[comp][i] == bp.phys[comp][i]);
            differs = differs || (ap.phys[comp][i] != cp.phys[comp][i]);
        }
    CHECK(identical);
    CHECK(differs);
    CHECK(max_abs(a) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("unresolvable width is rejected") {
    const GridSpec g = grid2d(16, 32.0);  // dx = 2
    CHECK_THROWS_AS(generate_data(g, "gaussian_vortex", {1.0, 0.5, 0, 0}),
                    std::runtime_error);
}

TEST_CASE("unknown kind is rejected") {
    CHECK_THROWS_AS(generate_data(grid2d(32), "vortex_sheet", {1.0, 4.0, 0, 0}), std::invalid_argument);
}
