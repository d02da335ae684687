#pragma once

#include <cmath>
#include <exception>
#include <optional>
#include <string>

#include "sievelab/constants.hpp"
#include "sievelab/errors.hpp"
#include "sievelab/jrho.hpp"
#include "sievelab/limits.hpp"
#include "sievelab/params.hpp"
#include "sievelab/quadrature.hpp"

namespace sievelab {

// Every summand of the direct objective, in evaluation order. The total is
// the plain left-to-right sum of the eight terms, nothing hidden.
struct ObjectiveBreakdown {
    double f1_term = 0.0;         // (5c - a) f1(vartheta)
    double double_int_term = 0.0; // nested F1 correction, empty when b = 1
    double cb_term = 0.0;         // -(c - b) int_{1/vt}^{b/vt} F1(vt(1-s)) ds/s
    double window_term = 0.0;     // -int_{b/vt}^{c/vt} (c/s - vt) F1(vt(1-s)) ds
    double kernel_term = 0.0;     // second F1 correction over [1/vt, (b+1)/(2vt)]
    double recovered_term = 0.0;  // +int_delta^{c/vt} (c/s - vt) F1(vt(1-s)) ds
    double f2_term = 0.0;         // -a e^{-gamma} int_delta^{c/vt} (c/s - vt) F2(vt(theta-s)) ds
    double j_term = 0.0;          // -(4 e^gamma c / a) * J(rho)
    double total = 0.0;
    double delta = 0.0;
    double j_value = 0.0;         // the triple integral behind j_term
    F2Mode f2_mode = F2Mode::clamp;
};

namespace detail {

template <typename Fn>
double h_term(const char* name, Fn&& fn) {
    try {
        return fn();
    } catch (const domain_error& e) {
        throw domain_error(std::string("H_direct[") + name + "]: " + e.what());
    }
}

}  // namespace detail

// Direct form of the sieve objective. All integrals run in the rescaled
// variable (exponents divided by theta1), so delta lives in [b/vt, c/vt].
// Empty ranges contribute exactly zero, which is what makes the b = 1
// reduction an identity rather than an approximation.
//
// J(rho) is independent of delta; callers scanning delta should compute it
// once and pass it via `j_value`.
inline ObjectiveBreakdown H_direct(const SieveParams& p, double delta,
                                   F2Mode mode = F2Mode::clamp,
                                   const SieveConstants& k = default_constants(),
                                   std::optional<double> j_value = {},
                                   long long budget = kDefaultQuadBudget) {
    const double vt = p.vartheta;
    if (!(delta >= p.b / vt - 1e-12 && delta <= p.c / vt + 1e-12))
        throw domain_error(
            detail::with_value("H_direct: delta outside [b/vartheta, c/vartheta]", delta));

    ObjectiveBreakdown out;
    out.delta = delta;
    out.f2_mode = mode;
    const double a = p.a, b = p.b, c = p.c, th = p.theta;
    const double eg = std::exp(k.euler_gamma);

    out.f1_term = detail::h_term("f1", [&] { return (5.0 * c - a) * f1(vt, k); });

    out.double_int_term = detail::h_term("double_int", [&] {
        long long evals = 0;
        const QuadResult q = integrate_counted(
            [&](double s) {
                const QuadResult inner = integrate_counted(
                    [&](double t) { return F1((1.0 - t) / s, k) / t; }, s,
                    (b + 1.0) / vt - s, 1e-11, evals, budget);
                return inner.value / s;
            },
            1.0 / vt, (b + 1.0) / (2.0 * vt), 1e-9, evals, budget);
        return -q.value;
    });

    out.cb_term = detail::h_term("cb", [&] {
        return -(c - b) *
               integrate([&](double s) { return F1(vt * (1.0 - s), k) / s; }, 1.0 / vt,
                         b / vt, 1e-9, budget)
                   .value;
    });

    out.window_term = detail::h_term("window", [&] {
        return -integrate([&](double s) { return (c / s - vt) * F1(vt * (1.0 - s), k); },
                          b / vt, c / vt, 1e-9, budget)
                    .value;
    });

    out.kernel_term = detail::h_term("kernel", [&] {
        return -integrate(
                    [&](double s) {
                        return ((b + 1.0) / vt - 2.0 * s) * F1((1.0 - s) / s, k) / (s * s);
                    },
                    1.0 / vt, (b + 1.0) / (2.0 * vt), 1e-9, budget)
                    .value;
    });

    out.recovered_term = detail::h_term("recovered", [&] {
        return integrate([&](double s) { return (c / s - vt) * F1(vt * (1.0 - s), k); }, delta,
                         c / vt, 1e-9, budget)
            .value;
    });

    out.f2_term = detail::h_term("f2", [&] {
        return -a / eg *
               integrate([&](double s) { return (c / s - vt) * F2(vt * (th - s), mode, k); },
                         delta, c / vt, 1e-9, budget)
                   .value;
    });

    out.j_value = j_value ? *j_value : J_rho(p.rho, {}, 1e-6, budget).value;
    out.j_term = -(4.0 * eg * c / a) * out.j_value;

    out.total = out.f1_term + out.double_int_term + out.cb_term + out.window_term +
                out.kernel_term + out.recovered_term + out.f2_term + out.j_term;
    return out;
}

// F piece of the rearranged objective: vanishes by construction at
// c = vt*theta, else integrates the stated derivative in the second argument
// back from that anchor. The inner integrand blows up as t -> vt*theta, so
// for c < vt*theta this raises the quadrature's non-convergence error.
inline double decomposed_F_term(const SieveParams& p, double delta,
                                F2Mode mode = F2Mode::clamp,
                                const SieveConstants& k = default_constants(),
                                long long budget = kDefaultQuadBudget) {
    const double vt = p.vartheta;
    const double anchor = vt * p.theta;
    const double eg2 = std::exp(2.0 * k.euler_gamma);
    long long evals = 0;
    const QuadResult q = integrate_counted(
        [&](double t) {
            return integrate_counted(
                       [&](double s) { return F2(vt * (p.theta - s), mode, k) / s; }, delta,
                       t / vt, 1e-9, evals, budget)
                .value;
        },
        p.c, anchor, 1e-7, evals, budget);
    return p.a / (2.0 * eg2) * q.value;
}

// The rearranged objective 2e^gamma (A b + B c + D + F). Purely diagnostic:
// its derivation assumes vartheta >= 4 and b >= vartheta - 3 (which the
// shipped optimum itself violates at b = 1), and its D and F pieces fail at
// typical inputs: D re-enters the direct objective at the corner point
// (vt*theta, vt*theta) where the delta window collapses, and F integrates a
// blowup at t = vt*theta. The report records each piece's value or error
// instead of insisting on a number.
struct DecomposedParts {
    double A = 0.0, B = 0.0, D = 0.0, F = 0.0;
    bool A_ok = false, B_ok = false, D_ok = false, F_ok = false;
    std::string A_error, B_error, D_error, F_error;
    std::exception_ptr first_failure;  // rethrown by the strict entry point
    bool assumptions_hold = false;     // vartheta >= 4 and b >= vartheta - 3
    double j_value = 0.0;
    double total = 0.0;                // only meaningful when all four pieces are ok
};

inline DecomposedParts H_decomposed_report(const SieveParams& p, double delta,
                                           F2Mode mode = F2Mode::clamp,
                                           const SieveConstants& k = default_constants(),
                                           std::optional<double> j_value = {},
                                           long long budget = kDefaultQuadBudget) {
    const double vt = p.vartheta;
    if (!(delta >= p.b / vt - 1e-12 && delta <= p.c / vt + 1e-12))
        throw domain_error(
            detail::with_value("H_decomposed: delta outside [b/vartheta, c/vartheta]", delta));
    if (!(delta > 0.0 && delta < 1.0))
        throw domain_error(detail::with_value("H_decomposed: delta outside (0, 1)", delta));

    DecomposedParts out;
    out.assumptions_hold = (vt >= 4.0 - 1e-12) && (p.b >= vt - 3.0 - 1e-12);
    out.j_value = j_value ? *j_value : J_rho(p.rho, {}, 1e-6, budget).value;
    const double eg = std::exp(k.euler_gamma);
    const double log_ratio = std::log((1.0 - delta) / delta);

    auto keep = [&out](const std::exception& e, std::string& slot) {
        slot = e.what();
        if (!out.first_failure) out.first_failure = std::current_exception();
    };

    try {
        const double f1v = f1(vt, k);
        const double wlog = integrate([&](double s) { return F1(vt * (1.0 - s), k) / s; },
                                      1.0 / vt, delta, 1e-9, budget)
                                .value;
        out.A = -f1v / eg + wlog / (2.0 * eg) + log_ratio / vt;
        out.B = f1v / eg - wlog / (2.0 * eg) - 2.0 * out.j_value / p.a;
        out.A_ok = out.B_ok = true;
    } catch (const std::exception& e) {
        keep(e, out.A_error);
        out.B_error = out.A_error;
    }

    try {
        const SieveParams corner = derive_params(p.rho, vt, vt * p.theta, vt * p.theta, k);
        const double h_corner = H_direct(corner, delta, mode, k, out.j_value, budget).total;
        out.D = h_corner / (2.0 * eg) - delta * log_ratio + 2.0 * vt * p.theta * out.j_value / p.a;
        out.D_ok = true;
    } catch (const std::exception& e) {
        keep(e, out.D_error);
    }

    try {
        out.F = decomposed_F_term(p, delta, mode, k, budget);
        out.F_ok = true;
    } catch (const std::exception& e) {
        keep(e, out.F_error);
    }

    if (out.A_ok && out.B_ok && out.D_ok && out.F_ok)
        out.total = 2.0 * eg * (out.A * p.b + out.B * p.c + out.D + out.F);
    return out;
}

// Strict form: a single number, with the first failing piece's error rethrown.
inline double H_decomposed(const SieveParams& p, double delta, F2Mode mode = F2Mode::clamp,
                           const SieveConstants& k = default_constants(),
                           std::optional<double> j_value = {},
                           long long budget = kDefaultQuadBudget) {
    const DecomposedParts parts = H_decomposed_report(p, delta, mode, k, j_value, budget);
    if (parts.first_failure) std::rethrow_exception(parts.first_failure);
    return parts.total;
}

}  // namespace sievelab
