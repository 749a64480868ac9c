#pragma once

#include <map>

#include "nsforge/field.hpp"
#include "nsforge/timegrid.hpp"

namespace nsforge {

/// Time-indexed velocity snapshots (spectral representation) plus the norm
/// time series used by every diagnostic. Immutable once finalized.
struct Trajectory {
    GridSpec grid;
    TimeGrid tg;
    std::vector<VectorField> snaps;
    std::map<double, std::vector<double>> norm_series;  // p -> ||u(t_i)||_p
    std::vector<double> energy_integral;                // running int_0^t ||u||_2^2

    std::size_t size() const { return snaps.size(); }
    double time(std::size_t i) const { return tg.nodes[i]; }
    const VectorField& at(std::size_t i) const { return snaps[i]; }

    const std::vector<double>& series(double p) const;

    /// Populate norm_series (defaults: {1, 2, n, 2n, inf}) and the running
    /// energy integral.
    void finalize(std::vector<double> exponents = {});

    double max_divergence_overall() const;
};

/// Kato-space instrumentation of a trajectory.
struct KatoNormReport {
    std::map<double, double> x_p_norms;  // p -> sup_t t^{1/2 - n/2p} ||u(t)||_p
    double y_norm = 0.0;                 // sup_t (1+t)^{(n+1)/4} ||u(t)||_2
    double l2time_integral = 0.0;        // int_0^{t_end} ||u||_2^2
    double l2time_tail_bound = 0.0;      // (2/n) K^2 t_end^{-n/2} from the envelope
    double k_envelope = 0.0;             // sup_t t^{(n+2)/4} ||u(t)||_2
};

KatoNormReport kato_norms(const Trajectory& tr);

}  // namespace nsforge
