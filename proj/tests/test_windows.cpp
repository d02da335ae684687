#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "sievelab/errors.hpp"
#include "sievelab/windows.hpp"

using namespace sievelab;
using Catch::Approx;

TEST_CASE("trig polynomial evaluation", "[windows]") {
    TrigPolynomial p;
    p.constant_term = 0.25;
    CHECK(p.degree() == 0);
    CHECK(p.eval(0.3) == 0.25);

    // cos(2 pi x) written as a pair of conjugate coefficients
    p.coefficients[1] = {0.5, 0.0};
    p.coefficients[-1] = {0.5, 0.0};
    CHECK(p.degree() == 1);
    CHECK(p.eval(0.0) == Approx(1.25).margin(1e-15));
    CHECK(p.eval(0.25) == Approx(0.25).margin(1e-15));
    CHECK(p.eval(0.5) == Approx(-0.75).margin(1e-14));
    CHECK(std::fabs(p.eval_complex(0.37).imag()) < 1e-15);
    // periodicity
    CHECK(p.eval(0.37) == Approx(p.eval(1.37)).margin(1e-12));
    CHECK(p.eval(0.37) == Approx(p.eval(-0.63)).margin(1e-12));
}

TEST_CASE("interval sandwich pair", "[windows]") {
    const SelbergPair pair = selberg_pair(0.1, 100);
    CHECK(pair.delta0 == 0.1);
    CHECK(pair.N == 100);
    // constant terms are exactly 2 delta0 -/+ 1/(N+1)
    CHECK(pair.minorant.constant_term == Approx(0.2 - 1.0 / 101.0).margin(1e-15));
    CHECK(pair.majorant.constant_term == Approx(0.2 + 1.0 / 101.0).margin(1e-15));
    CHECK(pair.majorant.constant_term - pair.minorant.constant_term
          == Approx(2.0 / 101.0).margin(1e-15));
    CHECK(pair.minorant.degree() == 100);
    CHECK(pair.minorant.coefficients.size() == 200);

    // sandwich of the indicator of (-0.1, 0.1) mod 1, off the jump points
    int violations = 0;
    double max_imag = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double x = -0.5 + i / 10000.0;
        if (std::fabs(std::fabs(x) - 0.1) < 1e-6) continue;
        const double chi = std::fabs(x) < 0.1 ? 1.0 : 0.0;
        const std::complex<double> lo = pair.minorant.eval_complex(x);
        const std::complex<double> hi = pair.majorant.eval_complex(x);
        if (lo.real() > chi + 1e-9) ++violations;
        if (hi.real() < chi - 1e-9) ++violations;
        max_imag = std::max({max_imag, std::fabs(lo.imag()), std::fabs(hi.imag())});
    }
    CHECK(violations == 0);
    CHECK(max_imag < 1e-10);

    // coefficient scale stays under the pinned envelope
    CHECK(pair.max_coefficient == Approx(0.19496887).margin(1e-6));
    CHECK(pair.coefficient_ratio == Approx(pair.max_coefficient / 0.1).margin(1e-12));
    CHECK(pair.coefficient_ratio < 2.15);

    // discrete Parseval on a grid finer than twice the degree
    const int m = 512;
    double grid_ms = 0.0;
    for (int i = 0; i < m; ++i) {
        const double v = pair.minorant.eval(double(i) / m);
        grid_ms += v * v;
    }
    grid_ms /= m;
    double energy = pair.minorant.constant_term * pair.minorant.constant_term;
    for (const auto& [n, c] : pair.minorant.coefficients) energy += std::norm(c);
    CHECK(grid_ms == Approx(energy).margin(1e-6));

    CHECK_THROWS_AS(selberg_pair(0.0, 100), domain_error);
    CHECK_THROWS_AS(selberg_pair(0.5, 100), domain_error);
    CHECK_THROWS_AS(selberg_pair(-0.1, 100), domain_error);
    CHECK_THROWS_AS(selberg_pair(0.1, 0), domain_error);
}

TEST_CASE("sandwich gap scales like 1/N", "[windows]") {
    // widening the degree tightens the mean gap exactly as 2/(N+1)
    for (int n : {10, 50, 200}) {
        const SelbergPair pair = selberg_pair(0.1, n);
        CHECK(pair.majorant.constant_term - pair.minorant.constant_term
              == Approx(2.0 / (n + 1)).margin(1e-15));
    }
}

TEST_CASE("smooth periodic window", "[windows]") {
    const SmoothWindow w = smooth_window(0.2, 0.7, 0.01, 2);
    CHECK(w.alpha == 0.2);
    CHECK(w.beta == 0.7);
    CHECK(w.order == 2);
    CHECK(w.H == 1000);
    CHECK(w.epsilon == 0.5);
    CHECK(w.mean == Approx(0.49).margin(1e-15));
    CHECK(w.poly.constant_term == w.mean);
    CHECK(std::fabs(w.mean - (w.beta - w.alpha)) <= w.delta + 1e-15);

    // plateau and support of the exact convolution are sharp
    CHECK(w.exact(0.45) == 1.0);
    CHECK(w.exact(0.21) == 1.0);
    CHECK(w.exact(0.69) == 1.0);
    CHECK(w.exact(0.2) == 0.0);
    CHECK(w.exact(0.7) == 0.0);
    CHECK(w.exact(0.1) == 0.0);
    CHECK(w.exact(0.9) == 0.0);
    CHECK(w.exact(0.205) == Approx(0.5).margin(1e-12));
    CHECK(w.exact(0.695) == Approx(0.5).margin(1e-12));
    int outside = 0;
    for (int i = 0; i <= 1000; ++i) {
        const double v = w.exact(i / 1000.0);
        if (v < -1e-12 || v > 1.0 + 1e-12) ++outside;
    }
    CHECK(outside == 0);

    // truncated series tracks the exact window within the recorded tail bound
    double max_diff = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const double x = i / 2000.0;
        max_diff = std::max(max_diff, std::fabs(w.poly.eval(x) - w.exact(x)));
    }
    CHECK(max_diff <= w.tail_bound + 1e-9);
    CHECK(w.tail_bound == Approx(0.000408441).margin(1e-6));
    CHECK(w.tail_constant == Approx(w.tail_bound / 0.01).margin(1e-9));
    CHECK(w.tail_constant < 0.05);

    // every coefficient obeys min(1/(pi h), beta - alpha)
    int coeff_bad = 0;
    for (const auto& [h, c] : w.poly.coefficients) {
        const double cap =
            std::min(1.0 / (3.14159265358979323846 * std::fabs(double(h))), w.beta - w.alpha);
        if (std::abs(c) > cap + 1e-15) ++coeff_bad;
    }
    CHECK(coeff_bad == 0);

    // discrete Parseval across the full truncation
    const int m = 4096;
    double grid_ms = 0.0;
    for (int i = 0; i < m; ++i) {
        const double v = w.poly.eval(double(i) / m);
        grid_ms += v * v;
    }
    grid_ms /= m;
    double energy = w.poly.constant_term * w.poly.constant_term;
    for (const auto& [h, c] : w.poly.coefficients) energy += std::norm(c);
    CHECK(grid_ms == Approx(energy).margin(1e-6));

    // higher convolution order keeps the sharp plateau
    const SmoothWindow w3 = smooth_window(0.2, 0.7, 0.01, 3);
    CHECK(w3.exact(0.45) == 1.0);
    CHECK(w3.exact(0.2) == 0.0);
    CHECK(w3.order == 3);

    CHECK_THROWS_AS(smooth_window(0.5, 0.4, 0.01, 2), domain_error);
    CHECK_THROWS_AS(smooth_window(0.2, 0.7, 0.3, 2), domain_error);
    CHECK_THROWS_AS(smooth_window(0.2, 0.7, 0.0, 2), domain_error);
    CHECK_THROWS_AS(smooth_window(0.2, 0.7, 0.01, 1), domain_error);
    CHECK_THROWS_AS(smooth_window(-0.1, 0.7, 0.01, 2), domain_error);
    CHECK_THROWS_AS(smooth_window(0.2, 1.1, 0.01, 2), domain_error);
}

TEST_CASE("irwin-hall ramp underlies the taper", "[windows]") {
    const SmoothWindow w = smooth_window(0.2, 0.7, 0.01, 2);
    CHECK(w.irwin_hall_cdf(0.0) == 0.0);
    CHECK(w.irwin_hall_cdf(-1.0) == 0.0);
    CHECK(w.irwin_hall_cdf(2.0) == 1.0);
    CHECK(w.irwin_hall_cdf(3.0) == 1.0);
    CHECK(w.irwin_hall_cdf(1.0) == Approx(0.5).margin(1e-15));
    // symmetry of the order-2 ramp around its midpoint
    for (double t : {0.1, 0.3, 0.7}) {
        CHECK(w.irwin_hall_cdf(1.0 - t) + w.irwin_hall_cdf(1.0 + t)
              == Approx(1.0).margin(1e-12));
    }
    // monotone
    double prev = -1.0;
    int drops = 0;
    for (int i = 0; i <= 200; ++i) {
        const double v = w.irwin_hall_cdf(2.0 * i / 200.0);
        if (v < prev) ++drops;
        prev = v;
    }
    CHECK(drops == 0);
}
