#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "sievelab/constants.hpp"
#include "sievelab/dilog.hpp"
#include "sievelab/errors.hpp"
#include "sievelab/quadrature.hpp"

namespace sievelab {

// Lower-bound limit function of the one-dimensional sieve, defined on [2, 6].
// The second branch integrates G over the history interval; empty at s = 4,
// so the branches join continuously there.
inline double f1(double s, const SieveConstants& k = default_constants()) {
    if (s < 2.0 - 1e-12 || s > 6.0 + 1e-12)
        throw domain_error(detail::with_value("f1: s outside [2, 6]", s));
    s = std::clamp(s, 2.0, 6.0);
    if (s <= 4.0) return k.A1 * std::log(s - 1.0) / s;
    const QuadResult hist =
        integrate([](double u) { return G_log_integral(u - 1.0) / u; }, 3.0, s - 1.0, 1e-9);
    return k.A1 / s * (std::log(s - 1.0) + hist.value);
}

// Upper-bound limit function of the one-dimensional sieve, defined on (0, 5].
inline double F1(double s, const SieveConstants& k = default_constants()) {
    if (s <= 0.0 || s > 5.0 + 1e-12)
        throw domain_error(detail::with_value("F1: s outside (0, 5]", s));
    s = std::min(s, 5.0);
    if (s <= 3.0) return k.A1 / s;
    return k.A1 / s * (1.0 + G_log_integral(s - 1.0));
}

enum class F2Mode { clamp, floor_one };

inline F2Mode parse_f2_mode(const std::string& name) {
    if (name == "clamp") return F2Mode::clamp;
    if (name == "floor-one" || name == "floor_one") return F2Mode::floor_one;
    throw domain_error("unknown F2 extension mode: " + name);
}

inline const char* f2_mode_name(F2Mode m) {
    return m == F2Mode::clamp ? "clamp" : "floor-one";
}

// Upper-bound limit function of the two-dimensional sieve. Exact for
// s <= beta2+1, a stated continuation on [beta2+1, beta2+2), and beyond that
// the mode decides: `clamp` freezes the value at (beta2+2)^- (still an upper
// bound, F2 being nonincreasing where it is exact), `floor_one` additionally
// enforces the trivial bound F2 >= 1.
inline double F2(double s, F2Mode mode = F2Mode::clamp,
                 const SieveConstants& k = default_constants()) {
    if (s <= 0.0) throw domain_error(detail::with_value("F2: s must be positive", s));
    if (s <= k.beta2 + 1.0) return k.A2 / (s * s);
    const double cap = k.beta2 + 2.0;
    const double s_eff = std::min(s, cap - 1e-9);
    double v = detail::f2_extension(s_eff, k.A2, k.beta2, k.C0);
    if (mode == F2Mode::floor_one) v = std::max(1.0, v);
    return v;
}

struct WeightParams {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double u = 0.0;      // always a/c, set by make_weight_params
    double x_log = 0.0;  // log of the sieving level
};

inline WeightParams make_weight_params(double a, double b, double c, double x_log) {
    if (!(1.0 <= b && b <= c && c <= a)) throw domain_error("weights: need 1 <= b <= c <= a");
    if (!(x_log > 0.0)) throw domain_error("weights: x_log must be positive");
    return {a, b, c, a / c, x_log};
}

// Linear logarithmic weight 1 - u*log(p)/log(x); vanishes at p = x^{c/a}.
inline double richert_weight(double p_log, const WeightParams& w) {
    if (!(p_log > 0.0 && p_log <= w.x_log)) throw domain_error("richert_weight: need 0 < log p <= log x");
    return 1.0 - w.u * p_log / w.x_log;
}

// Two-case refinement: small primes of an integer whose largest prime factor
// is known get the alternative cap c - b - 1 + a*log(P)/log(x).
inline double laborde_weight(double p_log, double largest_pf_log, bool is_largest,
                             const WeightParams& w) {
    if (!(largest_pf_log > 0.0 && largest_pf_log <= w.x_log))
        throw domain_error("laborde_weight: need 0 < log P <= log x");
    const double cw = w.c * richert_weight(p_log, w);
    if (is_largest || p_log / w.x_log >= w.b / w.a) return cw;
    return std::min(cw, w.c - w.b - 1.0 + w.a * largest_pf_log / w.x_log);
}

}  // namespace sievelab
