#pragma once

#include <mpfr.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "sievelab/errors.hpp"
#include "sievelab/primes.hpp"
#include "sievelab/quadrature.hpp"

namespace sievelab {

inline constexpr double kPsExponentSupArith = 755.0 / 662.0;

namespace detail {

struct PowParts {
    std::uint64_t floor_part = 0;
    bool integral = false;  // n^expo is an exact integer (256-bit certified)
};

// Floor of n^expo with a tiered precision ladder. The 80-bit result is
// trusted only when the fractional part clears both 1e-12 and 8 ulp;
// otherwise a 256-bit evaluation decides, and a fractional part it cannot
// separate from 0 or 1 (within 1e-25, excluding exact zero) is refused.
inline PowParts guarded_pow(std::uint64_t n, double expo) {
    if (n == 0) throw domain_error("guarded_pow: n must be positive");
    const long double t = std::pow((long double)n, (long double)expo);
    const long double fl = std::floor(t);
    const long double frac = t - fl;
    const long double ulp = std::ldexp(1.0L, std::ilogb(t) - 63);
    const long double guard = std::max((long double)1e-12, 8.0L * ulp);
    if (frac > guard && 1.0L - frac > guard) return {std::uint64_t(fl), false};

    mpfr_t mt, mg, mfl;
    mpfr_init2(mt, 256);
    mpfr_init2(mg, 256);
    mpfr_init2(mfl, 256);
    mpfr_set_ui(mt, (unsigned long)n, MPFR_RNDN);
    mpfr_set_d(mg, expo, MPFR_RNDN);  // the double exponent is the exact input
    mpfr_pow(mt, mt, mg, MPFR_RNDN);
    mpfr_floor(mfl, mt);
    mpfr_sub(mt, mt, mfl, MPFR_RNDN);
    const double frac_d = mpfr_get_d(mt, MPFR_RNDN);
    const bool exact_zero = mpfr_zero_p(mt) != 0;
    // Floors here stay far below 2^53, so the double round-trip is exact.
    const std::uint64_t floor_u = (std::uint64_t)mpfr_get_d(mfl, MPFR_RNDZ);
    mpfr_clear(mt);
    mpfr_clear(mg);
    mpfr_clear(mfl);
    if (exact_zero) return {floor_u, true};
    if (frac_d < 1e-25 || 1.0 - frac_d < 1e-25)
        throw precision_error(
            detail::with_value("guarded_pow: n^expo unresolvably close to an integer, n",
                               double(n)));
    return {floor_u, false};
}

inline std::uint64_t ceil_pow(std::uint64_t n, double expo) {
    const PowParts parts = guarded_pow(n, expo);
    return parts.floor_part + (parts.integral ? 0 : 1);
}

}  // namespace detail

// Whether p is hit by the floor of an exponential sequence: p = floor(n^c)
// for some integer n, with gamma_c = 1/c. Equivalent to the ceiling of
// (p+1)^gamma exceeding that of p^gamma by exactly one.
inline bool ps_indicator(std::uint64_t p, double gamma_c) {
    if (p < 1) throw domain_error("ps_indicator: p must be positive");
    if (!(gamma_c > 0.0 && gamma_c < 1.0))
        throw domain_error(detail::with_value("ps_indicator: need 0 < gamma_c < 1", gamma_c));
    return detail::ceil_pow(p + 1, gamma_c) - detail::ceil_pow(p, gamma_c) == 1;
}

// Logarithmic integral from 2, by adaptive quadrature; the caller's
// comparison tolerances absorb the lower-limit convention.
inline double li(double x) {
    if (!(x >= 2.0)) throw domain_error(detail::with_value("li: need x >= 2", x));
    return integrate([](double t) { return 1.0 / std::log(t); }, 2.0, x, 1e-9).value;
}

inline constexpr std::uint64_t kPiCCap = 10'000'000ULL;

// Exact count of n <= x whose floored power floor(n^c) is prime. A single
// primality table up to the largest reachable value keeps the loop cheap.
inline long long pi_c(std::uint64_t x, double c_exp) {
    if (x < 1) throw domain_error("pi_c: x must be positive");
    if (x > kPiCCap) throw capacity_error("pi_c: x above 1e7 cap");
    if (!(c_exp > 1.0 && c_exp < kPsExponentSupArith))
        throw domain_error(detail::with_value("pi_c: c outside (1, 755/662)", c_exp));
    const std::uint64_t top = detail::guarded_pow(x, c_exp).floor_part + 1;
    std::vector<bool> composite(top + 1, false);
    for (std::uint64_t i = 2; i * i <= top; ++i) {
        if (composite[i]) continue;
        for (std::uint64_t j = i * i; j <= top; j += i) composite[j] = true;
    }
    long long count = 0;
    for (std::uint64_t n = 1; n <= x; ++n) {
        const std::uint64_t v = detail::guarded_pow(n, c_exp).floor_part;
        if (v >= 2 && !composite[v]) ++count;
    }
    return count;
}

}  // namespace sievelab
