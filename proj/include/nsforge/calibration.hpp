#pragma once

#include <string>

namespace nsforge {

/// Measured surrogates for the paper's non-explicit constants, per dimension.
/// Produced by the amplitude-calibration sweep (CLI `sweep`), frozen in
/// data/calibration.json and versioned.
struct CalibrationDim {
    double c1 = 0.0;            // measured ||F(.,t)||_1 t^{1/2} (kernel L1 law)
    double c2 = 0.0;            // measured ||F(.,t)||_2 t^{(n+2)/4 - ...}, see law
    double gamma = 0.0;         // constant in int ||u||_2^2 <= gamma J^{4/(n+1)} ||a||_2^{...}
    double delta = 0.0;         // (S): largest contracting ||a||_n
    double delta_prime = 0.0;   // (S'): threshold for the Y-contraction lemma
    double delta_dblprime = 0.0;  // (A6) right-hand constant
};

struct Calibration {
    std::string version;
    CalibrationDim d2, d3;

    const CalibrationDim& dim(int n) const;

    /// Shipped calibration (data/calibration.json contents).
    static Calibration defaults();
    static Calibration load(const std::string& path);
    void save(const std::string& path) const;
};

}  // namespace nsforge
