#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "sievelab/errors.hpp"

namespace sievelab {

inline constexpr std::uint64_t kSieveCap = 1'000'000'000ULL;
inline constexpr std::uint64_t kFactorizeCap = 1'000'000'000'000'000ULL;  // 1e15

// Segmented Eratosthenes; memory stays bounded by the segment plus the base
// primes up to sqrt(limit).
inline std::vector<std::uint32_t> sieve_primes(std::uint64_t limit) {
    if (limit < 2) throw domain_error("sieve_primes: limit must be >= 2");
    if (limit > kSieveCap)
        throw capacity_error("sieve_primes: limit above 1e9 cap");
    const std::uint64_t root = std::uint64_t(std::sqrt(double(limit))) + 1;
    std::vector<char> small(root + 1, 1);
    std::vector<std::uint32_t> base;
    for (std::uint64_t i = 2; i <= root; ++i) {
        if (!small[i]) continue;
        base.push_back(std::uint32_t(i));
        for (std::uint64_t j = i * i; j <= root; j += i) small[j] = 0;
    }
    std::vector<std::uint32_t> primes;
    primes.reserve(std::size_t(double(limit) / std::max(1.0, std::log(double(limit)) - 1.1)));
    constexpr std::uint64_t kSeg = 1u << 20;
    std::vector<char> seg(kSeg);
    for (std::uint64_t lo = 2; lo <= limit; lo += kSeg) {
        const std::uint64_t hi = std::min(lo + kSeg - 1, limit);
        std::fill(seg.begin(), seg.begin() + std::size_t(hi - lo + 1), 1);
        for (std::uint32_t p : base) {
            const std::uint64_t p2 = std::uint64_t(p) * p;
            if (p2 > hi) break;
            std::uint64_t start = std::max(p2, (lo + p - 1) / p * p);
            for (std::uint64_t j = start; j <= hi; j += p) seg[std::size_t(j - lo)] = 0;
        }
        for (std::uint64_t i = lo; i <= hi; ++i)
            if (seg[std::size_t(i - lo)]) primes.push_back(std::uint32_t(i));
    }
    return primes;
}

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return std::uint64_t((unsigned __int128)a * b % m);
}

inline std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

}  // namespace detail

// Deterministic Miller-Rabin; the first twelve prime bases decide primality
// for every n below 3.3e18, far past the factorization cap.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL,
                            31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL,
                            31ULL, 37ULL}) {
        std::uint64_t x = detail::powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = detail::mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

namespace detail {

// Pollard's rho with Floyd cycling. Callers only reach this with an odd
// semiprime below the cap, whose smaller factor is at most ~3e7, so the
// expected iteration count is a few thousand; no batching needed.
inline std::uint64_t pollard_rho(std::uint64_t n) {
    if (n % 2 == 0) return 2;
    for (std::uint64_t c = 1;; ++c) {
        std::uint64_t x = 2, y = 2, d = 1;
        do {
            x = (mulmod_u64(x, x, n) + c) % n;
            y = (mulmod_u64(y, y, n) + c) % n;
            y = (mulmod_u64(y, y, n) + c) % n;
            d = std::gcd(x > y ? x - y : y - x, n);
        } while (d == 1);
        if (d != n) return d;  // d == n: cycle closed without a factor, retry
    }
}

}  // namespace detail

struct Factorization {
    std::uint64_t n = 1;
    std::vector<std::pair<std::uint64_t, int>> factors;  // ascending prime, exponent

    int omega() const { return int(factors.size()); }
    long long big_omega() const {
        long long s = 0;
        for (const auto& [p, e] : factors) {
            (void)p;
            s += e;
        }
        return s;
    }
    std::uint64_t largest_prime() const { return factors.empty() ? 1 : factors.back().first; }
};

// Trial division up to n^(1/3); whatever survives is 1, a prime, a prime
// square, or a semiprime with both factors above the cube root, so one
// primality test plus at most one rho split finishes the job.
inline Factorization factorize(std::uint64_t n) {
    if (n < 1) throw domain_error("factorize: n must be positive");
    if (n > kFactorizeCap) throw capacity_error("factorize: n above 1e15 cap");
    Factorization f;
    f.n = n;
    auto push = [&f](std::uint64_t p, int e) { f.factors.emplace_back(p, e); };
    std::uint64_t m = n;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL}) {
        if (m % p == 0) {
            int e = 0;
            while (m % p == 0) {
                m /= p;
                ++e;
            }
            push(p, e);
        }
    }
    const auto cbrt_bound = [&]() {
        std::uint64_t r = std::uint64_t(std::cbrt(double(m)));
        while (r * r * r > m) --r;
        while ((r + 1) * (r + 1) * (r + 1) <= m) ++r;
        return r;
    };
    std::uint64_t bound = cbrt_bound();
    for (std::uint64_t p = 7; p <= bound && m > 1; p += (p % 6 == 1) ? 4 : 2) {
        if (m % p) continue;
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        push(p, e);
        bound = cbrt_bound();
    }
    if (m > 1) {
        if (is_prime_u64(m)) {
            push(m, 1);
        } else {
            std::uint64_t r = std::uint64_t(std::sqrt(double(m)));
            while (r * r > m) --r;
            while ((r + 1) * (r + 1) <= m) ++r;
            if (r * r == m) {
                push(r, 2);  // r > cbrt(m) is prime by construction
            } else {
                const std::uint64_t d = detail::pollard_rho(m);
                const std::uint64_t q = m / d;
                push(std::min(d, q), 1);
                push(std::max(d, q), 1);
            }
        }
    }
    std::sort(f.factors.begin(), f.factors.end());
    return f;
}

enum class AlmostPrimeConvention { multiplicity, distinct };

inline bool is_almost_prime(std::uint64_t n, int r,
                            AlmostPrimeConvention conv = AlmostPrimeConvention::multiplicity) {
    if (n < 2) throw domain_error("is_almost_prime: n must be >= 2");
    if (r < 1) return false;
    const Factorization f = factorize(n);
    const long long count =
        conv == AlmostPrimeConvention::multiplicity ? f.big_omega() : f.omega();
    return count <= r;
}

}  // namespace sievelab
