#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "sievelab/errors.hpp"
#include "sievelab/hunter.hpp"
#include "sievelab/primes.hpp"
#include "sievelab/psprime.hpp"

using namespace sievelab;
using Catch::Approx;

TEST_CASE("linear form normalization", "[hunter]") {
    const NormalizedForm n = normalize(1.0, -2.0, 3.0);
    CHECK(n.scale == -3.0);
    CHECK(n.lambda0 == Approx(-1.0 / 3.0).margin(1e-15));
    CHECK(n.lambda1 == Approx(2.0 / 3.0).margin(1e-15));
    CHECK(n.lambda2 == -1.0);

    // signed identity on random lattice points
    std::mt19937_64 rng(11);
    int bad = 0;
    for (int i = 0; i < 100; ++i) {
        const double p = double(rng() % 1000 + 2);
        const double m = double(rng() % 1000 + 1);
        const double orig = 1.0 - 2.0 * p + 3.0 * m;
        const double norm = n.lambda0 + n.lambda1 * p - m;
        if (std::fabs(orig - n.scale * norm) > 1e-9 * (1.0 + std::fabs(orig))) ++bad;
    }
    CHECK(bad == 0);

    // already in normal form: untouched, scale 1
    const NormalizedForm id = normalize(0.25, std::sqrt(2.0), -1.0);
    CHECK(id.scale == 1.0);
    CHECK(id.lambda0 == 0.25);
    CHECK(id.lambda1 == std::sqrt(2.0));

    CHECK_THROWS_AS(normalize(0.0, 1.0, 0.0), domain_error);   // lambda2 = 0
    CHECK_THROWS_AS(normalize(0.0, 1.0, 1.0), domain_error);   // same-sign pair
    CHECK_THROWS_AS(normalize(0.0, -1.0, -1.0), domain_error);
    CHECK_THROWS_AS(normalize(0.0, 0.0, -1.0), domain_error);  // lambda1 = 0
}

TEST_CASE("census for the sqrt(2) form", "[hunter]") {
    HuntConfig cfg;
    cfg.lambda1 = std::sqrt(2.0);
    cfg.lambda1_sqrt = 2;
    cfg.tau = 1.0 / 118.0;
    cfg.X = 1000000;
    cfg.r = 3;
    const std::vector<SolutionRecord> recs = hunt(cfg);
    CHECK(recs.size() == 41959);

    // every record re-validated here with the exact quadratic identity
    // |2 p^2 - m^2| / (sqrt(2) p + m), independent of the scan's arithmetic
    long long bad = 0;
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const SolutionRecord& r = recs[i];
        if (i > 0 && recs[i - 1].p >= r.p) ++bad;
        if (!(std::fabs(r.value) < r.bound + 1e-15)) ++bad;
        if (r.big_omega_m > 3 || r.big_omega_m < 1) ++bad;
        const long double num = fabsl(2.0L * (long double)r.p * r.p -
                                      (long double)r.m * (long double)r.m);
        const long double den = sqrtl(2.0L) * (long double)r.p + (long double)r.m;
        if (fabsl(fabsl((long double)r.value) - num / den) > 1e-12L) ++bad;
        if (std::fabs(r.bound - std::pow(double(r.p), -1.0 / 118.0)) > 1e-12) ++bad;
    }
    CHECK(bad == 0);

    // the record a desk check reaches: p = 5, m = 7
    const auto it = std::find_if(recs.begin(), recs.end(),
                                 [](const SolutionRecord& r) { return r.p == 5; });
    REQUIRE(it != recs.end());
    CHECK(it->m == 7);
    CHECK(it->value == Approx(0.0710678).margin(1e-6));
    CHECK(it->big_omega_m == 1);

    // splitting the scan across threads changes nothing, bit for bit
    HuntConfig par = cfg;
    par.threads = 4;
    const std::vector<SolutionRecord> recs4 = hunt(par);
    REQUIRE(recs4.size() == recs.size());
    long long diff = 0;
    for (std::size_t i = 0; i < recs.size(); ++i)
        if (recs4[i].p != recs[i].p || recs4[i].m != recs[i].m ||
            recs4[i].value != recs[i].value || recs4[i].bound != recs[i].bound)
            ++diff;
    CHECK(diff == 0);
}

TEST_CASE("census counts move the right way", "[hunter]") {
    HuntConfig base;
    base.lambda1 = std::sqrt(2.0);
    base.lambda1_sqrt = 2;
    base.X = 1000000;
    base.r = 3;
    base.abs_bound = 1e-4;
    const std::vector<SolutionRecord> r3 = hunt(base);
    CHECK(r3.size() == 9);

    HuntConfig r1 = base;
    r1.r = 1;
    const std::vector<SolutionRecord> p1 = hunt(r1);
    CHECK(p1.size() == 1);
    // the stricter census is a subset of the looser one
    for (const SolutionRecord& r : p1) {
        const auto in3 = std::find_if(r3.begin(), r3.end(), [&](const SolutionRecord& s) {
            return s.p == r.p && s.m == r.m;
        });
        CHECK(in3 != r3.end());
    }

    HuntConfig tau = base;
    tau.abs_bound.reset();
    tau.tau = 1.0 / 118.0;
    const std::vector<SolutionRecord> big = hunt(tau);
    HuntConfig small_x = tau;
    small_x.X = 100000;
    const std::vector<SolutionRecord> small = hunt(small_x);
    CHECK(small.size() <= big.size());
    // smaller X is an exact prefix: the bound depends only on p
    bool prefix = true;
    for (std::size_t i = 0; i < small.size(); ++i)
        if (small[i].p != big[i].p || small[i].m != big[i].m) prefix = false;
    CHECK(prefix);

    HuntConfig tight = tau;
    tight.tau = 0.1;
    CHECK(hunt(tight).size() <= big.size());
}

TEST_CASE("exact half-integer distances never qualify", "[hunter]") {
    HuntConfig cfg;
    cfg.lambda0 = 0.5;
    cfg.lambda1 = 1.0;
    cfg.X = 1000;
    cfg.abs_bound = 0.6;
    cfg.r = 10;
    CHECK(hunt(cfg).empty());
}

TEST_CASE("hunt configuration validation", "[hunter]") {
    HuntConfig cfg;
    cfg.lambda1 = std::sqrt(2.0);
    cfg.X = 1000;
    // neither bound, then both bounds
    CHECK_THROWS_AS(hunt(cfg), domain_error);
    cfg.tau = 0.1;
    cfg.abs_bound = 0.1;
    CHECK_THROWS_AS(hunt(cfg), domain_error);
    cfg.abs_bound.reset();

    HuntConfig bad = cfg;
    bad.X = 1;
    CHECK_THROWS_AS(hunt(bad), domain_error);
    bad = cfg;
    bad.X = kHuntCap + 1;
    CHECK_THROWS_AS(hunt(bad), capacity_error);
    bad = cfg;
    bad.r = 0;
    CHECK_THROWS_AS(hunt(bad), domain_error);
    bad = cfg;
    bad.lambda1 = -1.0;
    CHECK_THROWS_AS(hunt(bad), domain_error);
    bad = cfg;
    bad.lambda2 = 1.0;
    CHECK_THROWS_AS(hunt(bad), domain_error);
    bad = cfg;
    bad.lambda1_sqrt = 3;  // sqrt(3) is not sqrt(2)
    CHECK_THROWS_AS(hunt(bad), domain_error);
    bad = cfg;
    bad.ps_mode = true;
    bad.c_exp = 2.0;
    CHECK_THROWS_AS(hunt(bad), domain_error);
}

TEST_CASE("floor-power filtered census", "[hunter]") {
    HuntConfig cfg;
    cfg.lambda1 = std::sqrt(2.0);
    cfg.lambda1_sqrt = 2;
    cfg.tau = 1.0 / 118.0;
    cfg.X = 100000;
    cfg.r = 3;
    const std::vector<SolutionRecord> plain = hunt(cfg);

    HuntConfig ps = cfg;
    ps.ps_mode = true;
    ps.c_exp = 1.05;
    const std::vector<SolutionRecord> filtered = hunt(ps);
    CHECK(!filtered.empty());
    CHECK(filtered.size() < plain.size());
    long long stray = 0;
    for (const SolutionRecord& r : filtered)
        if (!ps_indicator(r.p, 1.0 / 1.05)) ++stray;
    CHECK(stray == 0);

    // c -> 1+ admits every prime again
    HuntConfig near1 = cfg;
    near1.ps_mode = true;
    near1.c_exp = 1.0 + 1e-9;
    CHECK(hunt(near1).size() == plain.size());
}

TEST_CASE("sifted set construction", "[hunter]") {
    const SiftedSet set = build_sifted_set(std::sqrt(2.0), 1000000, 1.0 / 118.0);
    CHECK(set.q == 169);
    CHECK(set.a_prime == 239);
    CHECK(set.b_prime == 0);
    CHECK(set.xi == Approx(0.889513).margin(1e-6));
    CHECK(set.pi_X == 78498);
    CHECK(set.members.size() == 70448);
    const double ratio = double(set.members.size()) / (set.xi * double(set.pi_X));
    CHECK(ratio == Approx(1.008922).margin(1e-4));

    // replay the window membership with exact residue arithmetic on a'/q
    const std::vector<std::uint32_t> primes = sieve_primes(1000000);
    const long long q = 169, a = 239;
    const long long threshold =
        (long long)std::ceil((long double)q * (long double)set.xi / 2.0L);
    long long mism = 0;
    std::size_t idx = 0;
    for (std::uint32_t p : primes) {
        const long long r = ((long long)(p % q) * (a % q)) % q;
        if (std::min(r, q - r) < threshold) {
            const long long v = (long long)((__int128)p * a / q);
            if (idx >= set.members.size() || set.members[idx] != v) ++mism;
            ++idx;
        }
    }
    CHECK(mism == 0);
    CHECK(idx == set.members.size());

    // rho = 0 disables the window entirely
    const SiftedSet all = build_sifted_set(std::sqrt(2.0), 10000, 0.0);
    CHECK(all.xi == 1.0);
    CHECK(all.members.size() == all.pi_X);
    CHECK(all.members.size() == 1229);

    // hint moves to a larger convergent denominator
    const SiftedSet hinted = build_sifted_set(std::sqrt(2.0), 1000000, 1.0 / 118.0, 7);
    CHECK(hinted.q == 408);
    CHECK(hinted.a_prime == 577);
    CHECK_THROWS_AS(build_sifted_set(std::sqrt(2.0), 1000000, 1.0 / 118.0, 99),
                    no_convergent_error);

    // near-rational lambda1 has no usable convergent at this scale
    CHECK_THROWS_AS(build_sifted_set(1.0 + 1e-7, 1000000, 1.0 / 118.0),
                    no_convergent_error);

    // offset rounding: 0.3 * 169 = 50.7 -> 51; the 84.5 tie rounds to even
    CHECK(build_sifted_set(std::sqrt(2.0), 1000000, 1.0 / 118.0, {}, 0.3).b_prime == 51);
    CHECK(build_sifted_set(std::sqrt(2.0), 1000000, 1.0 / 118.0, {}, 0.5).b_prime == 84);

    CHECK_THROWS_AS(build_sifted_set(-1.0, 1000, 0.1), domain_error);
    CHECK_THROWS_AS(build_sifted_set(std::sqrt(2.0), 1000, 0.5), domain_error);
    CHECK_THROWS_AS(build_sifted_set(std::sqrt(2.0), 1000, -0.1), domain_error);
    CHECK_THROWS_AS(build_sifted_set(std::sqrt(2.0), kHuntCap + 1, 0.1), capacity_error);
}

TEST_CASE("divisor densities of the sifted set", "[hunter]") {
    const SiftedSet set = build_sifted_set(std::sqrt(2.0), 1000000, 1.0 / 118.0);
    const std::vector<DensityRow> rows = measure_density(set, 20);
    REQUIRE(rows.size() == 20);
    CHECK(rows[0].d == 1);
    CHECK(rows[0].observed == set.members.size());
    CHECK(rows[0].predicted == Approx(set.xi * double(set.pi_X)).margin(1e-9));
    CHECK(rows[0].relative_error == Approx(0.008922).margin(1e-4));

    std::vector<double> errs;
    for (const DensityRow& r : rows) errs.push_back(std::fabs(r.relative_error));
    std::nth_element(errs.begin(), errs.begin() + 9, errs.end());
    const double median = errs[9];
    CHECK(median < 0.1);
    CHECK(median == Approx(0.0075).margin(3e-3));

    // doubling X tightens the equidistribution
    const SiftedSet set2 = build_sifted_set(std::sqrt(2.0), 2000000, 1.0 / 118.0);
    const std::vector<DensityRow> rows2 = measure_density(set2, 20);
    std::vector<double> errs2;
    for (const DensityRow& r : rows2) errs2.push_back(std::fabs(r.relative_error));
    std::nth_element(errs2.begin(), errs2.begin() + 9, errs2.end());
    CHECK(errs2[9] < median);

    CHECK_THROWS_AS(measure_density(set, 0), domain_error);
    CHECK_THROWS_AS(measure_density(set, 51), domain_error);
}

TEST_CASE("two-dimensional divisor densities", "[hunter]") {
    CHECK(g2_density(1) == 1.0);
    CHECK(g2_density(2) == Approx(0.75).margin(1e-15));
    CHECK(g2_density(6) == Approx(0.75 * (2.0 / 3.0 - 1.0 / 9.0)).margin(1e-15));
    CHECK(g2_density(6) == Approx(5.0 / 12.0).margin(1e-15));

    const G2Table t = measure_g2(std::sqrt(2.0), 1000000, 1.0 / 118.0, 17, {1, 2, 3, 5, 6});
    CHECK(t.q == 169);
    CHECK(t.a_prime == 239);
    CHECK(t.z == 2);
    CHECK(t.p_fixed == 17);
    CHECK(t.member_count == 52550);
    REQUIRE(t.rows.size() == 5);
    CHECK(t.rows[0].d == 1);
    CHECK(t.rows[0].observed == t.member_count);
    CHECK(t.rows[0].predicted == Approx(1e6 * t.xi / 17.0).margin(1e-6));
    CHECK(t.rows[0].ratio == Approx(1.0043).margin(1e-3));
    CHECK(t.rows[1].ratio == Approx(1.0021).margin(1e-3));
    CHECK(t.rows[4].ratio == Approx(1.0003).margin(1e-3));
    for (const G2Row& row : t.rows) {
        CHECK(row.ratio > 0.9);
        CHECK(row.ratio < 1.1);
        CHECK(row.predicted == Approx(1e6 * t.xi / 17.0 * g2_density(row.d)).margin(1e-6));
    }

    CHECK_THROWS_AS(measure_g2(std::sqrt(2.0), 1000000, 1.0 / 118.0, 17, {4}),
                    domain_error);   // 4 is not squarefree
    CHECK_THROWS_AS(measure_g2(std::sqrt(2.0), 1000000, 1.0 / 118.0, 17, {34}),
                    domain_error);   // shares the fixed prime
    CHECK_THROWS_AS(measure_g2(std::sqrt(2.0), 1000000, 1.0 / 118.0, 16, {1}),
                    domain_error);   // fixed prime must be prime
    CHECK_THROWS_AS(measure_g2(std::sqrt(2.0), 100000000, 1.0 / 118.0, 2, {1}),
                    domain_error);   // fixed prime below X^(1/20)
}
