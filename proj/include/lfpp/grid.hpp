#pragma once

#include <cmath>
#include <stdexcept>

namespace lfpp::field {

// Dyadic grid over the unit square: vertices (i*eps, j*eps), 0 <= i,j <= 2^k,
// row-major. padding_factor extends the sampling domain beyond the square to
// keep boundary artifacts of the samplers away from it.
struct GridSpec {
    int k = 0;
    int n_per_side = 0;  // 2^k + 1
    double epsilon = 0;  // 2^-k
    double padding_factor = 1.0;
};

inline GridSpec make_grid(int k, double padding_factor = 1.0) {
    if (k < 0) throw std::domain_error("make_grid: k must be nonnegative");
    if (k > 20) throw std::domain_error("make_grid: k too large");
    if (padding_factor < 0) throw std::domain_error("make_grid: padding_factor must be nonnegative");
    GridSpec g;
    g.k = k;
    g.n_per_side = (1 << k) + 1;
    g.epsilon = std::ldexp(1.0, -k);
    g.padding_factor = padding_factor;
    return g;
}

}  // namespace lfpp::field
