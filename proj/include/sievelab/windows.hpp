#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "sievelab/errors.hpp"

namespace sievelab {

// Real-valued trigonometric polynomial c0 + sum c_n e(nx), e(t) = exp(2*pi*i*t).
// Coefficients are conjugate-symmetric; eval() returns the real part and
// eval_complex() keeps the (ideally negligible) imaginary residue visible.
struct TrigPolynomial {
    double constant_term = 0.0;
    std::map<long long, std::complex<double>> coefficients;  // nonzero n only

    std::complex<double> eval_complex(double x) const {
        std::complex<double> acc(constant_term, 0.0);
        for (const auto& [n, c] : coefficients) {
            const double arg = 2.0 * M_PI * double(n) * x;
            acc += c * std::complex<double>(std::cos(arg), std::sin(arg));
        }
        return acc;
    }
    double eval(double x) const { return eval_complex(x).real(); }

    long long degree() const {
        long long deg = 0;
        for (const auto& [n, c] : coefficients) {
            (void)c;
            deg = std::max(deg, std::llabs(n));
        }
        return deg;
    }
};

struct SelbergPair {
    TrigPolynomial minorant;  // A(t) <= chi(t)
    TrigPolynomial majorant;  // chi(t) <= B(t)
    double delta0 = 0.0;
    long long N = 0;
    double max_coefficient = 0.0;   // over both polynomials, n != 0
    double coefficient_ratio = 0.0; // max_coefficient / delta0, the recorded K
};

namespace detail {

// Vaaler's taper: phi(t) = pi t (1-t) cot(pi t) + t on (0, 1); phi(0+) = 1.
inline double vaaler_phi(double t) {
    return M_PI * t * (1.0 - t) / std::tan(M_PI * t) + t;
}

}  // namespace detail

// Majorant/minorant pair of degree N for the indicator of (-delta0, delta0)
// mod 1, built from Vaaler's sawtooth polynomial and the Fejer kernel. The
// indicator is chi(x) = 2 delta0 + psi(x - delta0) - psi(x + delta0) with
// psi the centered sawtooth; replacing psi by its Vaaler approximation and
// pushing the two-sided Fejer error outward gives the sandwich
//   A(x) <= chi(x) <= B(x)
// with constant terms exactly 2 delta0 -+ 1/(N+1).
inline SelbergPair selberg_pair(double delta0, long long N) {
    if (!(delta0 > 0.0 && delta0 < 0.5))
        throw domain_error(detail::with_value("selberg_pair: need 0 < delta0 < 1/2", delta0));
    if (N < 1) throw domain_error("selberg_pair: need N >= 1");

    const double K = double(N + 1);
    SelbergPair out;
    out.delta0 = delta0;
    out.N = N;
    out.minorant.constant_term = 2.0 * delta0 - 1.0 / K;
    out.majorant.constant_term = 2.0 * delta0 + 1.0 / K;

    for (long long n = 1; n <= N; ++n) {
        // sawtooth part: psi*(x - d) - psi*(x + d) = -2 sum m_h sin(2 pi h d) cos(2 pi h x)
        const double m_n = -detail::vaaler_phi(double(n) / K) / (M_PI * double(n));
        const double saw = -m_n * std::sin(2.0 * M_PI * double(n) * delta0);
        // Fejer part: [Delta_K(x-d) + Delta_K(x+d)] / (2K)
        const double fej = (1.0 / K) * (1.0 - double(n) / K) *
                           std::cos(2.0 * M_PI * double(n) * delta0);
        const double a_n = saw - fej;
        const double b_n = saw + fej;
        out.minorant.coefficients[n] = {a_n, 0.0};
        out.minorant.coefficients[-n] = {a_n, 0.0};
        out.majorant.coefficients[n] = {b_n, 0.0};
        out.majorant.coefficients[-n] = {b_n, 0.0};
        out.max_coefficient =
            std::max({out.max_coefficient, std::fabs(a_n), std::fabs(b_n)});
    }
    out.coefficient_ratio = out.max_coefficient / delta0;
    return out;
}

struct SmoothWindow {
    TrigPolynomial poly;       // truncated at |h| <= H
    double alpha = 0.0, beta = 1.0, delta = 0.0;
    int order = 2;             // r, number of box kernels
    double mean = 0.0;         // exact c_0 = beta - alpha - delta
    long long H = 0;           // truncation cutoff ceil(delta^{-(1+eps)})
    double epsilon = 0.0;      // the eps used for H
    double tail_bound = 0.0;   // sum_{|h| > H} |c_h|, upper bound
    double tail_constant = 0.0;// tail_bound / delta, the recorded C

    // Exact evaluation of the r-fold box smoothing of the indicator of
    // [alpha + delta/2, beta - delta/2], via the Irwin-Hall CDF. 1 on the
    // plateau [alpha+delta, beta-delta], 0 outside [alpha, beta].
    double exact(double x) const {
        const double t = x - std::floor(x);
        const double A = alpha + delta / 2.0, B = beta - delta / 2.0;
        const double w = delta / double(order);
        return irwin_hall_cdf((t - A) / w + double(order) / 2.0) -
               irwin_hall_cdf((t - B) / w + double(order) / 2.0);
    }

    // CDF of the sum of `order` iid uniforms on [0, 1].
    double irwin_hall_cdf(double t) const {
        const int r = order;
        if (t <= 0.0) return 0.0;
        if (t >= double(r)) return 1.0;
        double sum = 0.0, binom = 1.0;  // C(r, k)
        for (int k = 0; k <= int(t); ++k) {
            sum += (k % 2 == 0 ? 1.0 : -1.0) * binom * std::pow(t - double(k), r);
            binom = binom * double(r - k) / double(k + 1);
        }
        double rfact = 1.0;
        for (int i = 2; i <= r; ++i) rfact *= double(i);
        return sum / rfact;
    }
};

inline constexpr double kWindowEpsilon = 0.5;  // H = delta^{-(1+eps)}; r >= 2 then gives tail O(delta)

// Smoothed periodic indicator of [alpha, beta]: the plateau indicator of
// [alpha + delta/2, beta - delta/2] convolved r times with centered boxes of
// width delta/r. Fourier coefficients are closed-form products
//   c_h = e(-h mu) * sin(pi h L)/(pi h) * sinc(pi h delta / r)^r,
// mu = (alpha+beta)/2, L = beta - alpha - delta, so |c_h| <= min(1/(pi|h|), beta-alpha)
// with superpolynomial decay beyond r/(pi delta).
inline SmoothWindow smooth_window(double alpha, double beta, double delta, int r) {
    if (!(alpha >= 0.0 && alpha < beta && beta <= 1.0))
        throw domain_error("smooth_window: need 0 <= alpha < beta <= 1");
    if (!(delta > 0.0 && 2.0 * delta < beta - alpha))
        throw domain_error(detail::with_value("smooth_window: need 0 < 2*delta < beta - alpha",
                                              delta));
    if (r < 2) throw domain_error("smooth_window: need order r >= 2");

    SmoothWindow out;
    out.alpha = alpha;
    out.beta = beta;
    out.delta = delta;
    out.order = r;
    out.epsilon = kWindowEpsilon;
    out.H = (long long)std::ceil(std::pow(delta, -(1.0 + kWindowEpsilon)));

    const double mu = (alpha + beta) / 2.0;
    const double L = beta - alpha - delta;
    out.mean = L;
    out.poly.constant_term = L;

    auto coeff = [&](long long h) -> std::complex<double> {
        const double ph = M_PI * double(h);
        double mag = std::sin(ph * L) / ph;
        const double y = ph * delta / double(r);
        mag *= std::pow(std::sin(y) / y, double(r));
        const double arg = -2.0 * M_PI * double(h) * mu;
        return mag * std::complex<double>(std::cos(arg), std::sin(arg));
    };
    for (long long h = 1; h <= out.H; ++h) {
        const std::complex<double> c = coeff(h);
        out.poly.coefficients[h] = c;
        out.poly.coefficients[-h] = std::conj(c);
    }

    // Tail: numerically sum |c_h| out to where the envelope (1/(pi h)) *
    // (r/(pi h delta))^r certifies the rest below 1e-3 of the running total,
    // then add that analytic remainder.
    double tail = 0.0;
    const double env_base = double(r) / (M_PI * delta);
    long long h = out.H + 1;
    for (;; ++h) {
        tail += 2.0 * std::abs(coeff(h));  // +h and -h
        if (double(h) > 2.0 * env_base) {
            const double rest = 2.0 / (M_PI * double(r)) *
                                std::pow(env_base / double(h), double(r));
            if (rest < 1e-3 * tail + 1e-18) {
                tail += rest;
                break;
            }
        }
    }
    out.tail_bound = tail;
    out.tail_constant = tail / delta;
    return out;
}

}  // namespace sievelab
