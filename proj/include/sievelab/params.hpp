#pragma once

#include <cmath>

#include "sievelab/constants.hpp"
#include "sievelab/errors.hpp"

namespace sievelab {

// One admissible-parameter candidate with everything downstream derived from
// (rho, vartheta, b, c). theta1 carries the deliberate 1e-12 setback so the
// level-of-distribution inequality stays strict.
struct SieveParams {
    double rho = 0.0;
    double theta1 = 0.0;         // 1/3 - rho - 1e-12
    double theta2 = 0.0;         // 2/3 - rho
    double theta = 0.0;          // theta2 / theta1
    double vartheta = 0.0;
    double a = 0.0;              // vartheta / theta1
    double b = 0.0;
    double c = 0.0;
    double u = 0.0;              // a / c
    double delta0 = 0.0;         // crossover point, raw exponent units
    double lambda_max_inv = 0.0; // 5c - a
    double eta = 1e-12;          // proof artifacts, reported but never used
    double epsilon = 1e-12;
};

inline SieveParams derive_params(double rho, double vartheta, double b, double c,
                                 const SieveConstants& k = default_constants()) {
    if (!(rho > 0.0 && rho < 1.0 / 6.0))
        throw domain_error(detail::with_value("derive_params: need 0 < rho < 1/6", rho));
    if (!(vartheta > 0.0))
        throw domain_error(detail::with_value("derive_params: need vartheta > 0", vartheta));
    if (!(1.0 <= b && b <= c))
        throw domain_error("derive_params: need 1 <= b <= c");
    SieveParams p;
    p.rho = rho;
    p.theta1 = 1.0 / 3.0 - rho - 1e-12;
    p.theta2 = 2.0 / 3.0 - rho;
    if (!(p.theta1 > 0.0))
        throw domain_error(detail::with_value("derive_params: theta1 <= 0", p.theta1));
    p.theta = p.theta2 / p.theta1;
    p.vartheta = vartheta;
    p.a = vartheta / p.theta1;
    p.b = b;
    p.c = c;
    p.u = p.a / c;
    const double disc = k.A3 * k.A3 - 4.0 * k.A3 * (p.theta2 - p.theta1);
    if (disc < 0.0)
        throw domain_error(detail::with_value("derive_params: delta0 discriminant < 0", disc));
    p.delta0 = p.theta2 - 0.5 * (k.A3 - std::sqrt(disc));
    p.lambda_max_inv = 5.0 * c - p.a;
    return p;
}

}  // namespace sievelab
