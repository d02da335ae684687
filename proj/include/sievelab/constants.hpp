#pragma once

#include <cmath>

#include "sievelab/errors.hpp"

namespace sievelab {

inline constexpr double kEulerGamma = 0.57721566490153286061;

namespace detail {

// Continuation of the two-dimensional upper sieve function past beta2+1.
// C0 is the free constant fixed by continuity against A2/s^2 at s = beta2+1.
inline double f2_extension(double s, double A2, double beta2, double C0) {
    const double l = std::log(s - 1.0);
    const double head =
        2.0 * A2 * std::log(beta2) / (s - 1.0) + C0 + 2.0 * A2 * l * l + 4.0 * A2 * l;
    return head / (s * s) - 4.0 * A2 * (1.0 + s * l) / (s * s * (s - 1.0));
}

}  // namespace detail

// The constant set behind every evaluation. A2 and beta2 are inputs (the
// dimension-two sieve constants are only known to a few digits); the rest are
// derived so they can never drift out of sync.
struct SieveConstants {
    double euler_gamma = kEulerGamma;
    double A1 = 0.0;     // 2 e^gamma
    double A2 = 0.0;
    double beta2 = 0.0;
    double A3 = 0.0;     // A2 / (2 e^{2 gamma})
    double C0 = 0.0;     // continuity constant of the F2 continuation
};

// C0 enters the continuation affinely, so bisection on the continuity residual
// converges unconditionally. Solved to 1e-12 rather than hard-coded.
inline double solve_f2_continuity(double A2, double beta2) {
    const double s0 = beta2 + 1.0;
    const double target = A2 / (s0 * s0);
    auto residual = [&](double c0) { return detail::f2_extension(s0, A2, beta2, c0) - target; };
    double lo = -1e6, hi = 1e6;
    if (!(residual(lo) < 0.0 && residual(hi) > 0.0))
        throw domain_error("solve_f2_continuity: continuity residual does not bracket zero");
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (residual(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline SieveConstants make_constants(double A2 = 43.496, double beta2 = 4.8333) {
    if (!(A2 > 0.0) || !(beta2 > 1.0))
        throw domain_error("make_constants: need A2 > 0 and beta2 > 1");
    SieveConstants k;
    k.A1 = 2.0 * std::exp(kEulerGamma);
    k.A2 = A2;
    k.beta2 = beta2;
    k.A3 = A2 / (2.0 * std::exp(2.0 * kEulerGamma));
    k.C0 = solve_f2_continuity(A2, beta2);
    return k;
}

inline const SieveConstants& default_constants() {
    static const SieveConstants k = make_constants();
    return k;
}

}  // namespace sievelab
