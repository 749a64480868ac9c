#pragma once

#include "nsforge/synthesis.hpp"

namespace nsforge {

/// Log-log least-squares fit of a decaying quantity over a declared window.
/// The fit refuses windows outside the validity region sqrt(t) <= L/8 or
/// spanning less than one decade.
struct DecayReport {
    std::string quantity;
    double t0 = 0.0, t1 = 0.0;
    double exponent = 0.0;
    double intercept = 0.0;   // log-log intercept
    double residual = 0.0;    // rms of fit residuals in log space
    bool window_valid = false;
    int points = 0;
};

DecayReport decay_slope(const std::vector<std::pair<double, double>>& series, double t0,
                        double t1, const GridSpec& grid, const std::string& quantity = "");

/// Miyakawa-Schonbek test: beta = c - int int f must be a scalar matrix.
struct MSReport {
    std::array<std::array<double, 3>, 3> beta{};
    double scalar_part = 0.0;  // tr(beta)/n
    double deviation = 0.0;    // ||beta - (tr/n) I||_F
    double tolerance = 0.0;
    bool pass = false;
    int dim = 2;
};

MSReport ms_residual(const MomentMatrix& c_inf,
                     const std::array<std::array<double, 3>, 3>& force_integral,
                     double tolerance);

/// Fujigaki-Miyakawa first-order profile residual
///   u_j(t) + sum_k d_k E_t m_{kj} + sum_{l,k} F_{lk,j}(t) (c_{kl} - W_{kl})
/// with W the force space-time integral; reported as the weighted q-norm
/// series t^{1/2 + n/2 (1 - 1/q)} ||r(t)||_q.
struct ProfileResidualReport {
    double q = 2.0;
    std::vector<double> times;
    std::vector<double> weighted_residual;
    std::vector<bool> in_window;
};

ProfileResidualReport fm_profile_residual(
    const Trajectory& tr, const std::array<std::array<double, 3>, 3>& first_moments,
    const std::array<std::array<double, 3>, 3>& force_integral, const MomentMatrix& c,
    double q, const std::vector<double>& nodes);

/// Lemma "heat2": ||e^{t Lap} a||_2 <= t^{-(n+2)/4} ||grad E_1||_2 int |y||a|.
struct HeatMomentReport {
    double grad_e1_l2 = 0.0;     // ||grad E_1||_2 by quadrature
    double weighted_moment = 0.0;
    std::vector<double> times;
    std::vector<double> lhs, rhs, ratio;
    bool holds = true;
};

HeatMomentReport lemma_heat2_check(const VectorField& a, const std::vector<double>& nodes);

/// ||grad E_1||_2 in dimension n by radial quadrature (1/(4 sqrt(pi)) for n=2).
double grad_e1_l2_norm(int dim);

/// Quantified Wiegner envelope: C_emp = max_t ||u(t)||_2 / min(||a||_2,
/// K(a) t^{-(n+2)/4}) over valid nodes (empty max = 0, vacuous pass).
struct WiegnerReport {
    double c_emp = 0.0;
    double k_functional = 0.0;
    int nodes_used = 0;
    bool pass = true;
};

WiegnerReport wiegner_check(const Trajectory& tr, const VectorField& a, const Calibration& calib);

}  // namespace nsforge
