#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>

#include "sievelab/errors.hpp"
#include "sievelab/quadrature.hpp"

namespace sievelab {

// Triple nested integral over the simplex-like region
//   u1 in [rho/4, 1/4], u2 in [u1, (1-u1)/3], u3 in [u2, (1-u1-u2)/2]
// with integrand 1/(u1 (1-u1-2 rho)) * 1/u2 * 1/(u3 (1-u1-u2-u3)).
// All three levels run the same adaptive rule and draw on one evaluation
// budget; inner tolerances sit well below the requested outer tolerance so
// the nesting noise stays invisible at the reported accuracy.
//
// `lower_limit_override` replaces the printed outer lower limit rho/4; an
// override at or above 1/4 empties the outer range and yields exactly 0.
inline QuadResult J_rho(double rho, std::optional<double> lower_limit_override = {},
                        double abs_tol = 1e-6, long long budget = kDefaultQuadBudget) {
    if (!(rho > 0.0 && rho < 1.0 / 6.0)) throw domain_error("J_rho: need 0 < rho < 1/6");
    const double lo = lower_limit_override ? *lower_limit_override : rho / 4.0;
    if (!(lo > 0.0)) throw domain_error("J_rho: outer lower limit must be positive");
    if (!(abs_tol > 0.0)) throw domain_error("J_rho: abs_tol must be positive");
    // On [lo, 1/4] the outer denominator needs 1 - u1 - 2 rho > 0 at u1 = 1/4.
    if (1.0 - 0.25 - 2.0 * rho <= 0.0) throw domain_error("J_rho: outer denominator vanishes");

    long long evals = 0;
    const double mid_tol = abs_tol * 1e-2;
    const double inner_tol = abs_tol * 1e-4;
    QuadResult outer = integrate_counted(
        [&](double u1) {
            const QuadResult mid = integrate_counted(
                [&](double u2) {
                    const double s = 1.0 - u1 - u2;
                    const QuadResult inner = integrate_counted(
                        [&](double u3) { return 1.0 / (u3 * (s - u3)); }, u2, 0.5 * s,
                        inner_tol, evals, budget);
                    return inner.value / u2;
                },
                u1, (1.0 - u1) / 3.0, mid_tol, evals, budget);
            return mid.value / (u1 * (1.0 - u1 - 2.0 * rho));
        },
        lo, 0.25, abs_tol, evals, budget);
    outer.evaluations = evals;
    return outer;
}

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

// Seeded Monte-Carlo cross-check of J_rho along an entirely different
// computational path (no quadrature). Each coordinate is drawn log-uniformly
// on its exact range, which cancels the 1/u factors in the integrand and
// leaves the bounded weight
//   w = L1 L2 L3 / ((1 - u1 - 2 rho)(1 - u1 - u2 - u3)),
// L_i the log-lengths of the three ranges. Estimate = mean(w) with the usual
// sqrt(n) standard error.
inline McEstimate J_rho_mc(double rho, std::uint64_t samples, std::uint64_t seed) {
    if (!(rho > 0.0 && rho < 1.0 / 6.0)) throw domain_error("J_rho_mc: need 0 < rho < 1/6");
    if (samples < 2) throw domain_error("J_rho_mc: need at least 2 samples");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    const double log_lo1 = std::log(rho / 4.0), log_hi1 = std::log(0.25);
    double sum = 0.0, sum_sq = 0.0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        const double L1 = log_hi1 - log_lo1;
        const double u1 = std::exp(log_lo1 + L1 * unif(rng));
        const double hi2 = (1.0 - u1) / 3.0;
        const double L2 = std::log(hi2 / u1);
        const double u2 = u1 * std::exp(L2 * unif(rng));
        const double hi3 = 0.5 * (1.0 - u1 - u2);
        const double L3 = std::log(hi3 / u2);
        const double u3 = u2 * std::exp(L3 * unif(rng));
        const double w = (L1 * L2 * L3) / ((1.0 - u1 - 2.0 * rho) * (1.0 - u1 - u2 - u3));
        sum += w;
        sum_sq += w * w;
    }
    McEstimate out;
    out.samples = samples;
    out.seed = seed;
    out.value = sum / double(samples);
    const double var = (sum_sq - sum * sum / double(samples)) / double(samples - 1);
    out.std_error = std::sqrt(std::max(var, 0.0) / double(samples));
    return out;
}

}  // namespace sievelab
