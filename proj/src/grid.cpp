#include "nsforge/grid.hpp"

#include <cmath>

namespace nsforge {

namespace {
bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}

void GridSpec::validate() const {
    if (dim != 2 && dim != 3)
        throw std::invalid_argument("GridSpec: dim must be 2 or 3, got " + std::to_string(dim));
    if (points < 16 || !power_of_two(points))
        throw std::invalid_argument("GridSpec: points must be a power of two >= 16, got " +
                                    std::to_string(points));
    if (!(length > 0.0))
        throw std::invalid_argument("GridSpec: box length must be positive");
    if (!(dealias_fraction > 0.0) || dealias_fraction > 1.0)
        throw std::invalid_argument("GridSpec: dealias_fraction must lie in (0,1]");
}

double GridSpec::cell_volume() const {
    double v = 1.0;
    for (int d = 0; d < dim; ++d) v *= dx();
    return v;
}

std::size_t GridSpec::cells() const {
    std::size_t c = 1;
    for (int d = 0; d < dim; ++d) c *= static_cast<std::size_t>(points);
    return c;
}

std::size_t GridSpec::spec_size() const {
    std::size_t c = static_cast<std::size_t>(points / 2 + 1);
    for (int d = 0; d < dim - 1; ++d) c *= static_cast<std::size_t>(points);
    return c;
}

double GridSpec::wavenumber(int k_signed) const {
    return 2.0 * M_PI * k_signed / length;
}

}  // namespace nsforge
