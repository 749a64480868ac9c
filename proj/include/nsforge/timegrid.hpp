#pragma once

#include <string>
#include <vector>

namespace nsforge {

/// Strictly increasing time nodes starting at 0. Geometric grids are the
/// default for decay measurements, uniform grids for oracle cross-checks.
struct TimeGrid {
    std::vector<double> nodes;
    std::string kind = "uniform";
    double t_end = 1.0, t_min = 0.0, ratio = 0.0;
    int steps = 0;

    static TimeGrid uniform(double t_end, int steps);
    static TimeGrid geometric(double t_end, double t_min = 1e-3, double ratio = 1.2);

    /// Same node structure with every time scaled by `s` (lambda rescaling).
    TimeGrid scaled(double s) const;

    std::size_t size() const { return nodes.size(); }
    double back() const { return nodes.back(); }
    void validate() const;
};

}  // namespace nsforge
