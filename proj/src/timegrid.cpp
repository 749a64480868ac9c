#include "nsforge/timegrid.hpp"

#include <cmath>
#include <stdexcept>

namespace nsforge {

TimeGrid TimeGrid::uniform(double t_end, int steps) {
    if (!(t_end > 0.0) || steps < 1)
        throw std::invalid_argument("TimeGrid::uniform: need t_end > 0, steps >= 1");
    TimeGrid g;
    g.kind = "uniform";
    g.t_end = t_end;
    g.steps = steps;
    g.nodes.resize(steps + 1);
    for (int i = 0; i <= steps; ++i) g.nodes[i] = t_end * i / steps;
    return g;
}

TimeGrid TimeGrid::geometric(double t_end, double t_min, double ratio) {
    if (!(t_end > t_min) || !(t_min > 0.0) || !(ratio > 1.0))
        throw std::invalid_argument("TimeGrid::geometric: need 0 < t_min < t_end, ratio > 1");
    TimeGrid g;
    g.kind = "geometric";
    g.t_end = t_end;
    g.t_min = t_min;
    g.ratio = ratio;
    g.nodes.push_back(0.0);
    double t = t_min;
    while (t < t_end * (1.0 - 1e-12)) {
        g.nodes.push_back(t);
        t *= ratio;
    }
    g.nodes.push_back(t_end);
    g.steps = static_cast<int>(g.nodes.size()) - 1;
    return g;
}

TimeGrid TimeGrid::scaled(double s) const {
    if (!(s > 0.0)) throw std::invalid_argument("TimeGrid::scaled: factor must be positive");
    TimeGrid g = *this;
    for (double& t : g.nodes) t *= s;
    g.t_end *= s;
    g.t_min *= s;
    return g;
}

void TimeGrid::validate() const {
    if (nodes.empty() || nodes.front() != 0.0)
        throw std::invalid_argument("TimeGrid: first node must be 0");
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (!(nodes[i] > nodes[i - 1]))
            throw std::invalid_argument("TimeGrid: nodes must strictly increase");
}

}  // namespace nsforge
