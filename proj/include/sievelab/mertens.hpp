#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "sievelab/constants.hpp"
#include "sievelab/errors.hpp"
#include "sievelab/primes.hpp"

namespace sievelab {

struct MertensChecks {
    double product_ratio = 0.0;  // prod(1-1/p) * log x * e^gamma, should hover near 1
    double sum_residual = 0.0;   // sum 1/p - log log x, stabilizes near 0.2615
};

inline MertensChecks mertens_checks(std::uint64_t x) {
    if (x < 100) throw domain_error("mertens_checks: x must be >= 100");
    const auto primes = sieve_primes(x);  // capacity handled by the sieve
    double log_prod = 0.0, inv_sum = 0.0;
    for (std::uint32_t p : primes) {
        log_prod += std::log1p(-1.0 / p);
        inv_sum += 1.0 / p;
    }
    MertensChecks out;
    const double lx = std::log(double(x));
    out.product_ratio = std::exp(log_prod + kEulerGamma) * lx;
    out.sum_residual = inv_sum - std::log(lx);
    return out;
}

// Residuals of the dimension-two density sum against its predicted 2 log v
// growth: sum_{p<=v} (2/p - 1/p^2) log p - 2 log v. The shared O(1) constant
// keeps the whole sequence inside a narrow band.
inline std::vector<double> dimension_check(const std::vector<std::uint64_t>& v_grid) {
    if (v_grid.empty()) throw domain_error("dimension_check: empty grid");
    std::uint64_t v_max = 0;
    for (std::uint64_t v : v_grid) {
        if (v < 1000) throw domain_error("dimension_check: each v must be >= 1000");
        v_max = std::max(v_max, v);
    }
    const auto primes = sieve_primes(v_max);
    std::vector<double> out;
    out.reserve(v_grid.size());
    for (std::uint64_t v : v_grid) {
        double s = 0.0;
        for (std::uint32_t p : primes) {
            if (p > v) break;
            const double pd = double(p);
            s += (2.0 / pd - 1.0 / (pd * pd)) * std::log(pd);
        }
        out.push_back(s - 2.0 * std::log(double(v)));
    }
    return out;
}

}  // namespace sievelab
