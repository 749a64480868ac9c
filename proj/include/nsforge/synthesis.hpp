#pragma once

#include "nsforge/calibration.hpp"
#include "nsforge/norms.hpp"
#include "nsforge/solver.hpp"

namespace nsforge {

/// c_{kl} = int_0^inf int u_k u_l dy ds truncated at t_cut, with the tail
/// controlled by the fitted decay envelope ||u(t)||_2 <= K t^{-(n+2)/4}.
struct MomentMatrix {
    std::array<std::array<double, 3>, 3> entries{};
    double trace = 0.0;
    double t_cut = 0.0;
    double tail_bound = 0.0;
    int dim = 2;

    double frobenius() const;
    /// Smallest eigenvalue of the symmetric matrix (PSD check).
    double min_eigenvalue() const;
};

/// Quadrature of u_k u_l over [0, t_cut]. Throws when the tail bound exceeds
/// 1e-3 of the Frobenius norm (insufficient horizon).
MomentMatrix moment_matrix(const Trajectory& tr, double t_cut);

/// Largest node t <= validity cap where the tail bound falls below 1e-3 of
/// the running integral; returns the cap when the criterion is already met
/// there, throws (insufficient horizon) when it never is.
double pick_t_cut(const Trajectory& tr);

/// The paper's force recursion: off-diagonal c_{kl} phi, diagonal
/// (c_kk - cbar) phi.
SynthForce build_force(const MomentMatrix& c, const ForceProfile& phi);

/// Smallness functionals of the initial data.
///  J = ||a||_1^{1/2} (int |x||a|)^{1/2} + ||a||_{4n/(3+2n)}^2
///  K = int |x||a| + J^{4/(n+1)} ||a||_2^{2(n-1)/(n+1)}
///  L = gamma_emp * J^{4/(n+1)} ||a||_2^{2(n-1)/(n+1)}
struct Functionals {
    double J = 0.0, K = 0.0, L = 0.0;
};

Functionals functionals(const VectorField& a, const Calibration& calib);
Functionals functionals_from_norms(const NormReport& norms, int dim, const Calibration& calib);

/// Exponents needed by the functionals: {1, 2, n, 4n/(3+2n)}.
std::vector<double> functional_exponents(int dim);

/// One smallness inequality, evaluated literally.
struct SmallnessEntry {
    std::string name;
    double lhs = 0.0, rhs = 0.0;
    double margin = 0.0;  // (rhs - lhs)/rhs
    bool pass = false;
};

struct SmallnessReport {
    std::vector<SmallnessEntry> entries;
    bool all_pass = false;
    const SmallnessEntry& get(const std::string& name) const;
};

/// Conditions (S), (S'), (A1)..(A6) with the calibrated surrogate constants.
SmallnessReport check_smallness(const VectorField& a, const ForceProfile& phi,
                                const Calibration& calib);

struct ChooseRResult {
    ForceProfile profile;
    double R = 1.0;
    std::string binding_condition;  // smallest margin among (A1)-(A6)
    SmallnessReport report;
};

/// Double R from 1 until (A1)-(A6) hold with margin >= 10%. Throws with the
/// needed box size when R outgrows the box.
ChooseRResult choose_R(const VectorField& a, const ProfileBase& base, const Calibration& calib);

/// a_lambda(x) = lambda a(lambda x) by exact spectral resampling (integer
/// lambda; grid points map onto grid points). Throws on resolution loss.
VectorField lambda_rescale(const VectorField& a, int lambda);

struct SynthesisOptions {
    double tol = 1e-6;  // relative Frobenius on the c-matrix updates
    int max_outer = 25;
    bool override_smallness = false;
    PicardConfig picard{40, 1e-9};
    double t_cut = 0.0;  // 0 -> pick automatically from the unforced run
};

struct SynthesisState {
    int iterations = 0;          // final m
    std::vector<MomentMatrix> c_history;
    std::vector<double> delta_history;  // ||c^(m) - c^(m-1)||_F
    std::vector<double> ratio_history;
    SynthForce force;            // f^(infinity) ~= f^(M)
    Trajectory flow;             // v
    bool converged = false;
    bool diverged = false;
    std::string message;
    SmallnessReport smallness;
    double t_cut = 0.0;
};

/// The outer fixed-point loop of the paper: solve (N-S_m) with f^(m), compute
/// c^(m), build f^(m+1), repeat until the c-updates fall below tol.
SynthesisState synthesize(const VectorField& a, const ForceProfile& phi, const TimeGrid& tg,
                          const SynthesisOptions& opts, const Calibration& calib);

}  // namespace nsforge
