#pragma once

#include <cstddef>
#include <span>

namespace gml {

/// Three-point second difference (v[j-1] - 2 v[j] + v[j+1]) / h^2 at the
/// interior nodes; the two end entries of `out` are set to zero.
inline void second_difference(std::span<const double> v, double h, std::span<double> out) {
    const std::size_t last = v.size() - 1;
    const double inv_h2 = 1.0 / (h * h);
    out[0] = 0.0;
    out[last] = 0.0;
    for (std::size_t j = 1; j < last; ++j) {
        out[j] = (v[j - 1] - 2.0 * v[j] + v[j + 1]) * inv_h2;
    }
}

/// -alpha v^3 + beta v
inline double reaction(double v, double alpha, double beta) noexcept { return -alpha * v * v * v + beta * v; }

}  // namespace gml
