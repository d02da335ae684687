#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

#include "sievelab/contfrac.hpp"
#include "sievelab/errors.hpp"
#include "sievelab/primes.hpp"
#include "sievelab/psprime.hpp"

namespace sievelab {

inline constexpr std::uint64_t kHuntCap = 100'000'000ULL;

// Linear form scaled so lambda2 = -1 and lambda1 > 0; `scale` recovers
// residuals in the caller's original units.
struct NormalizedForm {
    double lambda0 = 0.0;
    double lambda1 = 0.0;
    double lambda2 = -1.0;
    double scale = 1.0;  // -original lambda2; original value = scale * normalized value
};

inline NormalizedForm normalize(double lambda0, double lambda1, double lambda2) {
    if (lambda2 == 0.0 || !(lambda1 / lambda2 < 0.0))
        throw domain_error("normalize: need lambda2 != 0 and lambda1/lambda2 < 0");
    NormalizedForm n;
    n.scale = -lambda2;  // dividing by -lambda2 sends lambda2 to -1
    n.lambda0 = lambda0 / n.scale;
    n.lambda1 = lambda1 / n.scale;
    n.lambda2 = -1.0;
    return n;
}

struct HuntConfig {
    double lambda0 = 0.0;
    double lambda1 = 0.0;                       // normalized, > 0
    double lambda2 = -1.0;                      // normalized, fixed
    std::optional<long long> lambda1_sqrt;      // lambda1 = sqrt of this integer, exact path
    std::optional<double> tau;                  // bound p^{-tau} ...
    std::optional<double> abs_bound;            // ... or this constant
    std::uint64_t X = 0;
    int r = 3;
    AlmostPrimeConvention convention = AlmostPrimeConvention::multiplicity;
    bool ps_mode = false;
    double c_exp = 0.0;                         // only read when ps_mode
    int threads = 1;
};

struct SolutionRecord {
    std::uint64_t p = 0;
    std::uint64_t m = 0;
    double value = 0.0;      // lambda0 + lambda1 p - m
    double bound = 0.0;
    long long big_omega_m = 0;
};

namespace detail {

// |lambda0 + lambda1 p - m| at extended precision; for sqrt forms the
// irrational part comes from the exact identity
// |sqrt(k) p - m| = |k p^2 - m^2| / (sqrt(k) p + m), whose numerator is
// integer arithmetic.
inline long double residual_extended(const HuntConfig& cfg, std::uint64_t p,
                                     std::uint64_t m) {
    if (cfg.lambda1_sqrt) {
        const unsigned __int128 kp2 =
            (unsigned __int128)(std::uint64_t)*cfg.lambda1_sqrt * p * p;
        const unsigned __int128 m2 = (unsigned __int128)m * m;
        const unsigned __int128 num = kp2 > m2 ? kp2 - m2 : m2 - kp2;
        const long double denom =
            std::sqrt((long double)*cfg.lambda1_sqrt) * p + (long double)m;
        long double irr = (long double)num / denom;  // |sqrt(k) p - m|
        if (kp2 < m2) irr = -irr;                    // sign of sqrt(k) p - m
        return (long double)cfg.lambda0 + irr;
    }
    return (long double)cfg.lambda0 + (long double)cfg.lambda1 * p - (long double)m;
}

inline long double bound_extended(const HuntConfig& cfg, std::uint64_t p) {
    if (cfg.abs_bound) return (long double)*cfg.abs_bound;
    return std::pow((long double)p, -(long double)*cfg.tau);
}

}  // namespace detail

// Scan primes p <= X for near-integer values of lambda0 + lambda1 p whose
// rounding target m is r-almost-prime. Work is split into contiguous blocks
// of the prime table, so the concatenated result is identical for any thread
// count; every candidate is re-verified at extended precision before being
// emitted (rounding near the bound must not produce false records).
inline std::vector<SolutionRecord> hunt(const HuntConfig& cfg) {
    if (!(cfg.lambda1 > 0.0) || cfg.lambda2 != -1.0)
        throw domain_error("hunt: config must be normalized (lambda1 > 0, lambda2 = -1)");
    if (cfg.lambda1_sqrt) {
        const double root = std::sqrt(double(*cfg.lambda1_sqrt));
        if (*cfg.lambda1_sqrt < 1 || std::fabs(root - cfg.lambda1) > 1e-9)
            throw domain_error("hunt: lambda1_sqrt does not match lambda1");
    }
    if (cfg.tau.has_value() == cfg.abs_bound.has_value())
        throw domain_error("hunt: exactly one of tau / abs_bound must be set");
    if (cfg.X < 2) throw domain_error("hunt: X must be >= 2");
    if (cfg.X > kHuntCap) throw capacity_error("hunt: X above 1e8 cap");
    if (cfg.r < 1) throw domain_error("hunt: r must be >= 1");
    if (cfg.ps_mode && !(cfg.c_exp > 1.0 && cfg.c_exp < kPsExponentSupArith))
        throw domain_error("hunt: ps_mode needs c in (1, 755/662)");

    const auto primes = sieve_primes(cfg.X);
    const int threads = std::max(1, cfg.threads);
    const std::size_t n = primes.size();
    const std::size_t block = (n + threads - 1) / std::max<std::size_t>(1, threads);

    std::vector<std::vector<SolutionRecord>> partial(threads);
    auto scan = [&](int t) {
        const std::size_t lo = std::min(n, t * block), hi = std::min(n, lo + block);
        auto& out = partial[t];
        for (std::size_t i = lo; i < hi; ++i) {
            const std::uint64_t p = primes[i];
            if (cfg.ps_mode && !ps_indicator(p, 1.0 / cfg.c_exp)) continue;
            const double v = cfg.lambda0 + cfg.lambda1 * double(p);
            const long long m_ll = (long long)std::llround(v);
            if (m_ll < 1) continue;
            const std::uint64_t m = (std::uint64_t)m_ll;
            const long double res = detail::residual_extended(cfg, p, m);
            const long double dist = std::fabs(res);
            if (dist == 0.5L) continue;  // exact half: no nearest integer
            const long double bound = detail::bound_extended(cfg, p);
            if (!(dist < bound)) continue;
            const Factorization f = factorize(m);
            const long long count = cfg.convention == AlmostPrimeConvention::multiplicity
                                        ? f.big_omega()
                                        : f.omega();
            if (count > cfg.r) continue;
            out.push_back({p, m, double(res), double(bound), f.big_omega()});
        }
    };
    if (threads == 1) {
        scan(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(scan, t);
        for (auto& th : pool) th.join();
    }
    std::vector<SolutionRecord> out;
    for (auto& part : partial) {
        out.insert(out.end(), part.begin(), part.end());
        part.clear();
    }
    return out;  // block order == ascending p
}

struct SiftedSet {
    unsigned long long q = 1;
    long long a_prime = 0;
    long long b_prime = 0;
    double xi = 1.0;
    std::uint64_t X = 0;
    std::uint64_t pi_X = 0;                // primes enumerated
    std::vector<long long> members;       // floor((b' + p a')/q), in prime order
};

namespace detail {

inline long long floor_div_ll(long long num, long long den) {
    long long quo = num / den;
    if ((num % den != 0) && ((num < 0) != (den < 0))) --quo;
    return quo;
}

// Convergent whose denominator sits closest to `target` on the log scale;
// must land within a factor of 4.
inline Convergent pick_convergent(double lambda1, double target,
                                  std::optional<std::size_t> index_hint) {
    const auto cf = continued_fraction(lambda1, (unsigned long long)std::llround(8.0 * target));
    if (cf.convergents.empty())
        throw no_convergent_error("pick_convergent: no convergents below the search cap");
    Convergent best;
    if (index_hint) {
        if (*index_hint >= cf.convergents.size())
            throw no_convergent_error("pick_convergent: index hint out of range");
        best = cf.convergents[*index_hint];
    } else {
        double best_dist = std::numeric_limits<double>::infinity();
        for (const Convergent& c : cf.convergents) {
            const double dist = std::fabs(std::log(double(c.den) / target));
            if (dist < best_dist) {
                best_dist = dist;
                best = c;
            }
        }
    }
    const double ratio = double(best.den) / target;
    if (ratio > 4.0 || ratio < 0.25)
        throw no_convergent_error(
            detail::with_value("pick_convergent: nearest denominator off target by, factor",
                               ratio > 1.0 ? ratio : 1.0 / ratio));
    return best;
}

}  // namespace detail

// The sifted value set: primes p <= X whose scaled linear form lands within
// xi/2 of an integer, each contributing floor((b' + p a')/q). The window test
// runs in exact residue arithmetic mod q; the only floating step is the
// threshold ceil(q xi / 2), computed once.
inline SiftedSet build_sifted_set(double lambda1, std::uint64_t X, double rho,
                                  std::optional<std::size_t> convergent_index_hint = {},
                                  double lambda0 = 0.0) {
    if (!(lambda1 > 0.0)) throw domain_error("build_sifted_set: lambda1 must be > 0");
    if (X < 2) throw domain_error("build_sifted_set: X must be >= 2");
    if (X > kHuntCap) throw capacity_error("build_sifted_set: X above 1e8 cap");
    if (!(rho >= 0.0 && rho < 0.5))
        throw domain_error(detail::with_value("build_sifted_set: need 0 <= rho < 1/2", rho));

    const double target = std::pow(double(X), 1.0 / 3.0 + rho);
    const Convergent conv = detail::pick_convergent(lambda1, target, convergent_index_hint);

    SiftedSet set;
    set.q = conv.den;
    set.a_prime = conv.num;
    set.b_prime = std::llrint(lambda0 * double(conv.den));  // nearest, ties to even
    set.xi = std::pow(double(X), -rho);
    set.X = X;

    const long long q = (long long)set.q;
    const long long threshold =
        (long long)std::ceil((long double)set.q * (long double)set.xi / 2.0L);
    const auto primes = sieve_primes(X);
    set.pi_X = primes.size();
    const long long a_mod = ((set.a_prime % q) + q) % q;
    const long long b_mod = ((set.b_prime % q) + q) % q;
    for (std::uint32_t p : primes) {
        const long long r = (b_mod + (long long)(p % set.q) * a_mod) % q;
        if (std::min(r, q - r) >= threshold) continue;
        set.members.push_back(
            detail::floor_div_ll(set.b_prime + (long long)p * set.a_prime, q));
    }
    return set;
}

struct DensityRow {
    long long d = 1;
    std::uint64_t observed = 0;
    double predicted = 0.0;  // pi(X) * xi / d
    double relative_error = 0.0;
};

inline std::vector<DensityRow> measure_density(const SiftedSet& set, int d_max) {
    if (d_max < 1 || d_max > 50) throw domain_error("measure_density: need 1 <= d_max <= 50");
    std::vector<DensityRow> rows;
    rows.reserve(d_max);
    for (long long d = 1; d <= d_max; ++d) {
        DensityRow row;
        row.d = d;
        for (long long v : set.members)
            if (v > 0 && v % d == 0) ++row.observed;
        row.predicted = double(set.pi_X) * set.xi / double(d);
        row.relative_error = row.predicted != 0.0
                                 ? (double(row.observed) - row.predicted) / row.predicted
                                 : 0.0;
        rows.push_back(row);
    }
    return rows;
}

struct G2Row {
    long long d = 1;
    double g2 = 1.0;                 // prod over p | d of (2/p - 1/p^2)
    std::uint64_t observed = 0;
    double predicted = 0.0;          // (X xi / p_fixed) * g2(d)
    double ratio = 0.0;
};

struct G2Table {
    unsigned long long q = 1;
    long long a_prime = 0;
    long long b_prime = 0;
    double xi = 1.0;
    std::uint64_t z = 1, X = 0, p_fixed = 0;
    std::uint64_t member_count = 0;
    std::vector<G2Row> rows;
};

inline double g2_density(long long d) {
    const Factorization f = factorize((std::uint64_t)d);
    double g = 1.0;
    for (const auto& [p, e] : f.factors) {
        (void)e;
        const double pd = double(p);
        g *= 2.0 / pd - 1.0 / (pd * pd);
    }
    return g;
}

// Product-set analogue: n in [z, X] (all integers) contributes n * v with
// v = floor((a' n + b')/q) when p_fixed | v and the same xi/2 window holds.
// Observed counts of d | n*v are compared against (X xi / p_fixed) g2(d).
inline G2Table measure_g2(double lambda1, std::uint64_t X, double rho, std::uint64_t p_fixed,
                          const std::vector<long long>& d_list,
                          std::optional<std::size_t> convergent_index_hint = {}) {
    if (X < 4) throw domain_error("measure_g2: X too small");
    if (X > kHuntCap) throw capacity_error("measure_g2: X above 1e8 cap");
    if (!is_prime_u64(p_fixed)) throw domain_error("measure_g2: p_fixed must be prime");
    const double z_real = std::pow(double(X), 1.0 / 20.0);
    if (double(p_fixed) < z_real)
        throw domain_error(detail::with_value("measure_g2: p_fixed below X^(1/20)",
                                              double(p_fixed)));
    for (long long d : d_list) {
        if (d < 1) throw domain_error("measure_g2: d must be positive");
        const Factorization f = factorize((std::uint64_t)d);
        for (const auto& [p, e] : f.factors) {
            if (e > 1)
                throw domain_error(detail::with_value("measure_g2: d not squarefree, d",
                                                      double(d)));
            if (p == p_fixed)
                throw domain_error(detail::with_value("measure_g2: d shares p_fixed, d",
                                                      double(d)));
        }
    }

    const double target = std::pow(double(X), 1.0 / 3.0 + rho);
    const Convergent conv = detail::pick_convergent(lambda1, target, convergent_index_hint);
    G2Table table;
    table.q = conv.den;
    table.a_prime = conv.num;
    table.b_prime = 0;
    table.xi = std::pow(double(X), -rho);
    table.z = (std::uint64_t)std::ceil(z_real);
    table.X = X;
    table.p_fixed = p_fixed;

    const long long q = (long long)conv.den;
    const long long threshold =
        (long long)std::ceil((long double)conv.den * (long double)table.xi / 2.0L);
    const long long a_mod = ((conv.num % q) + q) % q;

    std::vector<std::uint64_t> member_n, member_v;
    long long r = (a_mod * (long long)(table.z % conv.den)) % q;
    for (std::uint64_t n = table.z; n <= X; ++n) {
        if (std::min(r, q - r) < threshold) {
            const long long v = detail::floor_div_ll((long long)n * conv.num, q);
            if (v > 0 && v % (long long)p_fixed == 0) {
                member_n.push_back(n);
                member_v.push_back((std::uint64_t)v);
            }
        }
        r += a_mod;
        if (r >= q) r -= q;
    }
    table.member_count = member_n.size();

    for (long long d : d_list) {
        G2Row row;
        row.d = d;
        row.g2 = g2_density(d);
        for (std::size_t i = 0; i < member_n.size(); ++i) {
            const unsigned __int128 prod = (unsigned __int128)member_n[i] * member_v[i];
            if (prod % (unsigned __int128)d == 0) ++row.observed;
        }
        row.predicted = double(X) * table.xi / double(p_fixed) * row.g2;
        row.ratio = row.predicted != 0.0 ? double(row.observed) / row.predicted : 0.0;
        table.rows.push_back(row);
    }
    return table;
}

}  // namespace sievelab
