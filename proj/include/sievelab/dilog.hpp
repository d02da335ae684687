#pragma once

#include <cmath>

#include "sievelab/errors.hpp"

namespace sievelab {
namespace detail {

// Li2(z) = sum z^k / k^2, valid and fast for 0 <= z <= 1/2 (the only range
// the G closed form ever requests).
inline double li2_series(double z) {
    if (z < 0.0 || z > 0.5 + 1e-12) throw domain_error("li2_series: z outside [0, 1/2]");
    double term = z, sum = 0.0;
    for (int k = 1; k < 200; ++k) {
        sum += term / (double(k) * k);
        term *= z;
        if (term < 1e-18 * (double(k) * k)) break;
    }
    return sum;
}

inline const double kLi2Half = li2_series(0.5);  // pi^2/12 - ln^2(2)/2
inline const double kLn2 = std::log(2.0);

}  // namespace detail

// G(x) = int_2^x log(v-1)/v dv, in closed form via the dilogarithm.
// Needs x >= 2; G(2) = 0.
inline double G_log_integral(double x) {
    if (x < 2.0 - 1e-12) throw domain_error("G_log_integral: x must be >= 2");
    if (x <= 2.0) return 0.0;
    const double lx = std::log(x);
    return 0.5 * lx * lx + detail::li2_series(1.0 / x) - 0.5 * detail::kLn2 * detail::kLn2 -
           detail::kLi2Half;
}

}  // namespace sievelab
