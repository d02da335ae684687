#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "sievelab/errors.hpp"

namespace sievelab {

struct Convergent {
    long long num = 0;                // a'_k
    unsigned long long den = 1;       // q_k
};

struct ContinuedFraction {
    double target = 0.0;
    std::vector<long long> partial_quotients;  // first may be 0 for x < 1
    std::vector<Convergent> convergents;
};

// Partial quotients of x via exact Euclid on the binary rational the double
// stores (mantissa over a power of two), so no drift accumulates. The
// expansion of that rational eventually terminates; hitting the end while
// more convergents were still wanted means the double has no more to say,
// which is the precision error below.
//
// When a1 = 1 the k=0 and k=1 convergents share denominator 1; only the
// closer k=1 one is kept so denominators increase strictly.
inline ContinuedFraction continued_fraction(double x, unsigned long long max_q) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw domain_error(detail::with_value("continued_fraction: need finite x > 0", x));
    if (max_q < 1) throw domain_error("continued_fraction: max_q must be >= 1");
    if (x < 0x1p-40 || x >= 0x1p40)
        throw domain_error(detail::with_value(
            "continued_fraction: |log2 x| > 40 unsupported", x));
    if (double(max_q) * x >= 0x1p62 || max_q >= (1ULL << 62))
        throw capacity_error("continued_fraction: max_q too large for exact numerators");

    int e = 0;
    const double mant = std::frexp(x, &e);          // x = mant * 2^e, mant in [1/2, 1)
    unsigned __int128 P = (unsigned long long)std::ldexp(mant, 53);
    unsigned __int128 Q = 1;
    if (e >= 53)
        P <<= (e - 53);
    else
        Q <<= (53 - e);

    ContinuedFraction out;
    out.target = x;
    unsigned __int128 pm1 = 1, pm2 = 0;  // p_{-1}, p_{-2}
    unsigned __int128 qm1 = 0, qm2 = 1;
    while (true) {
        if (Q == 0) {
            // Exact expansion ended. Harmless only if no further convergent
            // could have fit under max_q anyway (minimal next q is qm1+qm2).
            if (qm1 + qm2 <= max_q)
                throw precision_error(
                    "continued_fraction: double-precision expansion exhausted before max_q");
            break;
        }
        const unsigned __int128 a = P / Q;
        const unsigned __int128 p = a * pm1 + pm2;
        const unsigned __int128 q = a * qm1 + qm2;
        if (q > max_q) break;
        out.partial_quotients.push_back((long long)a);
        out.convergents.push_back({(long long)p, (unsigned long long)q});
        const unsigned __int128 rem = P - a * Q;
        P = Q;
        Q = rem;
        pm2 = pm1;
        pm1 = p;
        qm2 = qm1;
        qm1 = q;
    }
    if (out.convergents.size() >= 2 && out.convergents[0].den == out.convergents[1].den)
        out.convergents.erase(out.convergents.begin());
    return out;
}

}  // namespace sievelab
