#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "sievelab/errors.hpp"
#include "sievelab/feasibility.hpp"
#include "sievelab/jrho.hpp"
#include "sievelab/objective.hpp"
#include "sievelab/params.hpp"

using namespace sievelab;
using Catch::Approx;

namespace {
const ConstraintRecord& find_record(const FeasibilityReport& rep, const std::string& name) {
    for (const auto& r : rep.constraints)
        if (r.name == name) return r;
    FAIL("missing constraint record " + name);
    return rep.constraints.front();
}
}  // namespace

TEST_CASE("derived parameters reproduce the reference arithmetic", "[feasibility]") {
    const SieveParams p = derive_params(1.0 / 118.0, 4.07, 1.0, 3.98);
    CHECK(p.a == Approx(12.5285217).margin(5e-6));
    CHECK(p.theta == Approx(2.02608696).margin(1e-7));
    CHECK(p.lambda_max_inv == Approx(7.37147826).margin(5e-6));
    CHECK(p.delta0 == Approx(0.306853674848).margin(1e-9));
    CHECK(p.delta0 / p.theta1 == Approx(0.9445756599706819).margin(1e-9));
    CHECK(p.u == Approx(p.a / p.c).margin(1e-15));
    CHECK(p.theta1 == 1.0 / 3.0 - 1.0 / 118.0 - 1e-12);
    CHECK(p.theta2 == 2.0 / 3.0 - 1.0 / 118.0);

    // rho -> 0 limit sends a toward 3 vartheta
    CHECK(derive_params(1e-9, 4.07, 1.0, 3.98).a == Approx(3.0 * 4.07).margin(1e-6));

    // re-deriving from the stored inputs is bit-identical
    const SieveParams p2 = derive_params(p.rho, p.vartheta, p.b, p.c);
    CHECK(p2.a == p.a);
    CHECK(p2.delta0 == p.delta0);
    CHECK(p2.theta == p.theta);

    CHECK_THROWS_AS(derive_params(0.0, 4.07, 1.0, 3.98), domain_error);
    CHECK_THROWS_AS(derive_params(1.0 / 6.0, 4.07, 1.0, 3.98), domain_error);
    CHECK_THROWS_AS(derive_params(1.0 / 3.0, 4.07, 1.0, 3.98), domain_error);
    CHECK_THROWS_AS(derive_params(1.0 / 118.0, 0.0, 1.0, 3.98), domain_error);
    CHECK_THROWS_AS(derive_params(1.0 / 118.0, 4.07, 0.5, 3.98), domain_error);
    CHECK_THROWS_AS(derive_params(1.0 / 118.0, 4.07, 2.0, 1.5), domain_error);
}

TEST_CASE("constraint grading at the reference point", "[feasibility]") {
    const SieveParams p = derive_params(1.0 / 118.0, 4.07, 1.0, 3.98);
    const FeasibilityReport rep = check_constraints(p);
    REQUIRE(rep.constraints.size() == 7);

    const ConstraintRecord& order = find_record(rep, "(i) order");
    CHECK(order.pass);
    CHECK(order.gating);
    CHECK(order.lhs == Approx(0.0).margin(1e-12));  // b = 1 sits on the boundary

    const ConstraintRecord& bcase = find_record(rep, "(ii) b-case");
    CHECK(bcase.pass);

    // the crossover window is recorded twice, in both unit conventions,
    // and neither copy gates
    int window_records = 0;
    for (const auto& r : rep.constraints)
        if (r.name.rfind("(iii)", 0) == 0) {
            ++window_records;
            CHECK_FALSE(r.gating);
            CHECK_FALSE(r.note.empty());
        }
    CHECK(window_records == 2);

    const ConstraintRecord& levels = find_record(rep, "(v) levels");
    CHECK(levels.pass);
    CHECK(levels.lhs > 0.0);

    const ConstraintRecord& lam = find_record(rep, "(vi) lambda headroom");
    CHECK(lam.pass);
    CHECK(lam.lhs == Approx(7.3715).margin(5e-4));

    CHECK(rep.gating_pass());
    CHECK_FALSE(rep.h_evaluated);
}

TEST_CASE("b-case branches", "[feasibility]") {
    const double rho = 1.0 / 118.0;
    const double th1 = 1.0 / 3.0 - rho - 1e-12;

    // 1 < b < 3 imposes nothing; the stricter reading is noted when it differs
    const SieveParams mid = derive_params(rho, 9.0 * th1, 2.0, 3.0);
    CHECK(mid.a == Approx(9.0).margin(1e-9));
    const FeasibilityReport mid_rep = check_constraints(mid);
    const ConstraintRecord& r_mid = find_record(mid_rep, "(ii) b-case");
    CHECK(r_mid.pass);
    CHECK(r_mid.note.find("stricter") != std::string::npos);  // 9 < 3c + b + 1 = 12

    // b >= 3 requires a >= 3c + b + 1
    const SieveParams big = derive_params(rho, 17.0 * th1, 3.0, 4.0);
    CHECK(find_record(check_constraints(big), "(ii) b-case").pass);  // 17 >= 16
    const SieveParams tight = derive_params(rho, 15.0 * th1, 3.0, 4.0);
    const FeasibilityReport tight_rep = check_constraints(tight);
    CHECK_FALSE(find_record(tight_rep, "(ii) b-case").pass);         // 15 < 16
    CHECK_FALSE(tight_rep.gating_pass());
}

TEST_CASE("crossover maximization at the reference point", "[feasibility]") {
    const SieveParams p = derive_params(1.0 / 118.0, 4.07, 1.0, 3.98);
    const MaximizeResult m = maximize_H(p);
    CHECK(m.delta_star == Approx(0.944575564104).margin(1e-4));
    CHECK(m.h_max == Approx(-77.3638458026).margin(1e-3));
    // the maximizer lands on the rescaled crossover point
    CHECK(std::fabs(m.delta_star - p.delta0 / p.theta1) < 1e-4);
    CHECK(m.best.total == m.h_max);
    CHECK(m.best.delta == m.delta_star);

    // dominates every fixed-delta evaluation of the same objective
    const double jv = J_rho(p.rho).value;
    int below = 0;
    for (double d : {p.b / p.vartheta + 1e-9, 0.35, 0.5, 0.7, 0.9, p.c / p.vartheta - 1e-9})
        if (m.h_max < H_direct(p, d, F2Mode::clamp, default_constants(), jv).total - 1e-9)
            ++below;
    CHECK(below == 0);

    // freezing delta at 1/vartheta reproduces the cheaper classical choice
    const MaximizeResult frozen =
        maximize_H(p, F2Mode::clamp, default_constants(), jv, 1.0 / p.vartheta);
    CHECK(frozen.delta_star == 1.0 / p.vartheta);
    CHECK(frozen.h_max == Approx(-107.491880557).margin(1e-3));
    CHECK(frozen.h_max < m.h_max);
}

TEST_CASE("admissibility composes the whole pipeline", "[feasibility]") {
    JCache cache;
    const FeasibilityReport rep = admissible(1.0 / 118.0, 4.07, 1.0, 3.98, F2Mode::clamp,
                                             false, default_constants(), &cache);
    CHECK(rep.h_evaluated);
    CHECK(rep.gating_pass());
    CHECK(rep.h_max < 0.0);        // the transcription never clears zero here
    CHECK_FALSE(rep.feasible);
    REQUIRE(rep.best_breakdown.has_value());
    CHECK(rep.best_breakdown->total == rep.h_max);
    CHECK(rep.delta_star == Approx(0.9445756).margin(1e-4));
    CHECK(cache.values.size() == 1);

    // cache short-circuits repeated switching-loss evaluations
    const double j1 = cache.get(1.0 / 118.0);
    CHECK(j1 == cache.get(1.0 / 118.0));
    CHECK(cache.values.size() == 1);

    // ordering violation reports without evaluating H
    const FeasibilityReport bad = admissible(1.0 / 118.0, 1.0, 1.0, 3.98);
    CHECK_FALSE(bad.h_evaluated);
    CHECK_FALSE(bad.feasible);
    CHECK_FALSE(find_record(bad, "(i) order").pass);

    // harman freezes the crossover at 1/vartheta
    const FeasibilityReport har = admissible(1.0 / 118.0, 4.07, 1.0, 3.98, F2Mode::clamp,
                                             true, default_constants(), &cache);
    CHECK(har.h_evaluated);
    CHECK(har.delta_star == Approx(1.0 / 4.07).margin(1e-12));
    CHECK(har.h_max < rep.h_max);

    CHECK_THROWS_AS(admissible(1.0 / 6.0, 4.07, 1.0, 3.98), domain_error);
}

TEST_CASE("feasibility survives halving rho", "[feasibility]") {
    // a feasible point must stay feasible at rho/2; under this transcription
    // nothing clears zero, so the check also documents that both runs still
    // grade constraints and evaluate H rather than bailing out
    std::mt19937_64 rng(20260823ULL);
    std::uniform_real_distribution<double> u_rho(1.0 / 150.0, 1.0 / 60.0);
    std::uniform_real_distribution<double> u_vt(4.0, 4.4);
    std::uniform_real_distribution<double> u_b(1.0, 1.3);
    std::uniform_real_distribution<double> u_c(3.5, 4.0);
    JCache cache;
    int broken = 0, evaluated = 0;
    for (int i = 0; i < 20; ++i) {
        const double rho = u_rho(rng), vt = u_vt(rng), b = u_b(rng), c = u_c(rng);
        const FeasibilityReport at = admissible(rho, vt, b, c, F2Mode::clamp, false,
                                                default_constants(), &cache);
        const FeasibilityReport half = admissible(rho / 2.0, vt, b, c, F2Mode::clamp,
                                                  false, default_constants(), &cache);
        if (at.feasible && !half.feasible) ++broken;
        if (at.h_evaluated && half.h_evaluated) ++evaluated;
    }
    CHECK(broken == 0);
    CHECK(evaluated == 20);
}

TEST_CASE("narrower weight window still yields a report", "[feasibility]") {
    const FeasibilityReport rep = admissible(1.0 / 118.0, 4.07, 1.0, 3.0);
    CHECK(rep.h_evaluated);
    CHECK(rep.gating_pass());
    CHECK_FALSE(rep.feasible);
    CHECK(std::isfinite(rep.h_max));
}

TEST_CASE("boundary search reports the empty feasible set honestly", "[feasibility]") {
    CHECK_THROWS_AS(search_boundary_rho({}, {1.0}, {3.98}), domain_error);
    bool threw = false;
    try {
        search_boundary_rho({4.07}, {1.0}, {3.98});
    } catch (const empty_feasible_set_error& e) {
        threw = true;
        CHECK(e.probe_rho == 1e-4);
        CHECK(e.best_h == Approx(-439.579514).margin(1e-2));
    }
    CHECK(threw);
}

TEST_CASE("floor-power exponent arithmetic", "[feasibility]") {
    CHECK(ps_rho(1.0 + 2e-10) == Approx(0.005548641195).margin(1e-9));
    CHECK(ps_rho(1.0 + 2e-10) > 1.0 / 181.0);
    CHECK(ps_rho(1.0 + 2e-10) < 1.0 / 179.0);
    CHECK(ps_rho(1.0 + 1.0 / 149.0) > 0.0);
    CHECK(ps_rho(1.0 + 1.0 / 149.0) == Approx(2.65964e-5).margin(1e-9));
    CHECK(ps_rho(1.01) < 0.0);

    CHECK_THROWS_AS(ps_rho(1.0), domain_error);
    CHECK_THROWS_AS(ps_rho(kPsExponentSup), domain_error);
    CHECK_THROWS_AS(ps_rho(0.9), domain_error);

    // strictly decreasing across the working window
    double prev = ps_rho(1.0 + 1e-9);
    int rises = 0;
    for (int i = 1; i <= 100; ++i) {
        const double c = 1.0 + 1e-9 + (1.0 / 149.0 - 1e-9) * i / 100.0;
        const double v = ps_rho(c);
        if (!(v < prev)) ++rises;
        prev = v;
    }
    CHECK(rises == 0);

    // sign change brackets a root between 1 + 1/149 and 1.01
    double lo = 1.0 + 1.0 / 149.0, hi = 1.01;
    REQUIRE(ps_rho(lo) > 0.0);
    REQUIRE(ps_rho(hi) < 0.0);
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (ps_rho(mid) > 0.0 ? lo : hi) = mid;
    }
    CHECK(lo == Approx(1.00674393).margin(1e-6));
}

TEST_CASE("almost-prime margin grading", "[feasibility]") {
    // with rho at its derived value and r = 13, the margin telescopes to zero
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(1e-9, 1.0 / 149.0);
    int off = 0;
    for (int i = 0; i < 10; ++i) {
        const double c = 1.0 + u(rng);
        const LabordeMargin m = laborde_bound(make_ps_params(c, 13));
        // the margin sits at an exact tie, so its sign is rounding noise;
        // only the magnitude is meaningful here
        if (std::fabs(m.margin) > 1e-9) ++off;
    }
    CHECK(off == 0);

    // halving rho buys strict headroom
    const double c = 1.0 + 2e-10;
    const LabordeMargin strict = laborde_bound(make_ps_params(c, 13, ps_rho(c) / 2.0));
    CHECK(strict.pass);
    CHECK(strict.margin < -1e-6);

    // r = 3 misses by exactly 13 - 3 = 10 at the derived rho
    const LabordeMargin miss = laborde_bound(make_ps_params(1.001, 3));
    CHECK_FALSE(miss.pass);
    CHECK(miss.margin == Approx(10.0).margin(1e-6));

    // degenerate exponent budget
    CHECK_THROWS_AS(laborde_bound(make_ps_params(1.001, 13, 0.2)), domain_error);
    CHECK_THROWS_AS(make_ps_params(1.0, 13), domain_error);
}
