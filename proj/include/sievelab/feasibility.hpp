#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sievelab/constants.hpp"
#include "sievelab/errors.hpp"
#include "sievelab/jrho.hpp"
#include "sievelab/objective.hpp"
#include "sievelab/params.hpp"

namespace sievelab {

struct ConstraintRecord {
    std::string name;
    std::string expression;
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
    bool gating = true;  // advisory records are reported but excluded from `feasible`
    std::string note;
};

struct FeasibilityReport {
    SieveParams params;
    F2Mode f2_mode = F2Mode::clamp;
    std::vector<ConstraintRecord> constraints;
    bool h_evaluated = false;
    double delta_star = std::numeric_limits<double>::quiet_NaN();
    double h_max = std::numeric_limits<double>::quiet_NaN();
    std::optional<ObjectiveBreakdown> best_breakdown;  // H terms at delta_star
    bool feasible = false;

    bool gating_pass() const {
        for (const auto& r : constraints)
            if (r.gating && !r.pass) return false;
        return true;
    }
};

// The triple integral only depends on rho, so parameter scans keep one of
// these around instead of re-integrating per candidate.
struct JCache {
    std::map<double, double> values;
    double get(double rho, long long budget = kDefaultQuadBudget) {
        auto it = values.find(rho);
        if (it != values.end()) return it->second;
        const double v = J_rho(rho, {}, 1e-6, budget).value;
        values.emplace(rho, v);
        return v;
    }
};

// Chained inequalities are recorded as their tightest slack vs 0 so a reader
// can see how close the parameter point sits to each boundary.
inline FeasibilityReport check_constraints(const SieveParams& p,
                                           std::optional<double> delta_star = {},
                                           const SieveConstants& k = default_constants()) {
    (void)k;
    FeasibilityReport rep;
    rep.params = p;
    const double vt = p.vartheta;

    {
        ConstraintRecord r;
        r.name = "(i) order";
        r.expression = "1 <= b <= c <= a (slack = min of the three gaps)";
        r.lhs = std::min({p.b - 1.0, p.c - p.b, p.a - p.c});
        r.rhs = 0.0;
        r.pass = r.lhs >= 0.0;
        rep.constraints.push_back(r);
    }
    {
        ConstraintRecord r;
        r.name = "(ii) b-case";
        if (std::fabs(p.b - 1.0) < 1e-12) {
            r.expression = "b = 1 branch";
            r.lhs = p.b;
            r.rhs = 1.0;
            r.pass = true;
        } else if (p.b >= 3.0) {
            r.expression = "a >= 3c + b + 1 (required since b >= 3)";
            r.lhs = p.a;
            r.rhs = 3.0 * p.c + p.b + 1.0;
            r.pass = r.lhs >= r.rhs;
        } else {
            r.expression = "no condition for 1 < b < 3 under the adopted case split";
            r.lhs = p.a;
            r.rhs = 3.0 * p.c + p.b + 1.0;
            r.pass = true;
            if (r.lhs < r.rhs) r.note = "stricter every-b>1 reading would fail here";
        }
        rep.constraints.push_back(r);
    }
    {
        ConstraintRecord r;
        r.name = "(iii) delta0 window, raw units";
        r.expression = "b/vartheta <= delta0 <= c/vartheta (slack = min distance to an edge)";
        r.lhs = std::min(p.delta0 - p.b / vt, p.c / vt - p.delta0);
        r.rhs = 0.0;
        r.pass = r.lhs >= 0.0;
        r.gating = false;
        r.note = "advisory: recorded in both unit conventions, gates nothing";
        rep.constraints.push_back(r);
        const double d0r = p.delta0 / p.theta1;
        r.name = "(iii) delta0 window, rescaled units";
        r.expression = "b/vartheta <= delta0/theta1 <= c/vartheta (slack = min distance to an edge)";
        r.lhs = std::min(d0r - p.b / vt, p.c / vt - d0r);
        r.pass = r.lhs >= 0.0;
        rep.constraints.push_back(r);
    }
    {
        ConstraintRecord r;
        const double delta_used = delta_star ? *delta_star : p.c / vt;
        r.name = "(iv) rho range";
        r.expression = "0 < rho < min{1/delta, 1/a}";
        r.lhs = p.rho;
        r.rhs = std::min(1.0 / delta_used, 1.0 / p.a);
        r.pass = p.rho > 0.0 && p.rho < r.rhs;
        if (1.0 / delta_used <= 1.0 / p.a)
            r.note = "1/delta is the binding side, unusual at desk scale";
        rep.constraints.push_back(r);
    }
    {
        ConstraintRecord r;
        r.name = "(v) levels";
        r.expression = "theta1 + rho < 1/3 and theta1 > 0 (slack = min of the two margins)";
        r.lhs = std::min(1.0 / 3.0 - (p.theta1 + p.rho), p.theta1);
        r.rhs = 0.0;
        r.pass = r.lhs > 0.0;
        rep.constraints.push_back(r);
    }
    {
        ConstraintRecord r;
        r.name = "(vi) lambda headroom";
        r.expression = "5c - a > 0";
        r.lhs = p.lambda_max_inv;
        r.rhs = 0.0;
        r.pass = r.lhs > 0.0;
        rep.constraints.push_back(r);
    }
    rep.feasible = false;  // no H value yet; admissible() finishes the story
    return rep;
}

struct MaximizeResult {
    double delta_star = 0.0;
    double h_max = 0.0;
    ObjectiveBreakdown best;
};

// Coarse 64-point scan of delta in [b/vt, c/vt], then golden-section
// refinement around the best grid point down to a 1e-6 wide bracket.
// `frozen_delta` skips the search entirely (the fixed-delta variant).
inline MaximizeResult maximize_H(const SieveParams& p, F2Mode mode = F2Mode::clamp,
                                 const SieveConstants& k = default_constants(),
                                 std::optional<double> j_value = {},
                                 std::optional<double> frozen_delta = {},
                                 long long budget = kDefaultQuadBudget) {
    const double lo = p.b / p.vartheta, hi = p.c / p.vartheta;
    const double jv = j_value ? *j_value : J_rho(p.rho, {}, 1e-6, budget).value;
    auto eval = [&](double d) { return H_direct(p, d, mode, k, jv, budget); };

    if (frozen_delta) {
        const ObjectiveBreakdown br = eval(*frozen_delta);
        return {*frozen_delta, br.total, br};
    }
    if (hi - lo < 1e-14) {
        const ObjectiveBreakdown br = eval(lo);
        return {lo, br.total, br};
    }

    constexpr int kGrid = 64;
    int best_i = 0;
    double best_v = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < kGrid; ++i) {
        const double d = lo + (hi - lo) * i / double(kGrid - 1);
        const double v = eval(d).total;
        if (v > best_v) {
            best_v = v;
            best_i = i;
        }
    }
    double xa = lo + (hi - lo) * std::max(best_i - 1, 0) / double(kGrid - 1);
    double xb = lo + (hi - lo) * std::min(best_i + 1, kGrid - 1) / double(kGrid - 1);
    const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = xb - invphi * (xb - xa), x2 = xa + invphi * (xb - xa);
    double f1v = eval(x1).total, f2v = eval(x2).total;
    while (xb - xa > 1e-6) {
        if (f1v >= f2v) {
            xb = x2;
            x2 = x1;
            f2v = f1v;
            x1 = xb - invphi * (xb - xa);
            f1v = eval(x1).total;
        } else {
            xa = x1;
            x1 = x2;
            f1v = f2v;
            x2 = xa + invphi * (xb - xa);
            f2v = eval(x2).total;
        }
    }
    const double d_star = 0.5 * (xa + xb);
    const ObjectiveBreakdown br = eval(d_star);
    return {d_star, br.total, br};
}

// Full pipeline for one parameter point: derive, maximize H over delta
// (unless harman freezes it at 1/vartheta), then grade every constraint with
// the realized delta. `feasible` is the conjunction of the gating constraint
// flags and h_max > 0.
inline FeasibilityReport admissible(double rho, double vartheta, double b, double c,
                                    F2Mode mode = F2Mode::clamp, bool harman = false,
                                    const SieveConstants& k = default_constants(),
                                    JCache* j_cache = nullptr,
                                    long long budget = kDefaultQuadBudget) {
    const SieveParams p = derive_params(rho, vartheta, b, c, k);
    const bool order_ok = 1.0 <= b && b <= c && c <= p.a;

    std::optional<double> delta_star;
    FeasibilityReport rep;
    if (order_ok) {
        const double jv = j_cache ? j_cache->get(rho, budget)
                                  : J_rho(rho, {}, 1e-6, budget).value;
        std::optional<double> frozen;
        if (harman) frozen = 1.0 / vartheta;
        const MaximizeResult m = maximize_H(p, mode, k, jv, frozen, budget);
        rep = check_constraints(p, m.delta_star, k);
        rep.h_evaluated = true;
        rep.delta_star = m.delta_star;
        rep.h_max = m.h_max;
        rep.best_breakdown = m.best;
    } else {
        rep = check_constraints(p, {}, k);
    }
    rep.f2_mode = mode;
    rep.feasible = rep.gating_pass() && rep.h_evaluated && rep.h_max > 0.0;
    return rep;
}

struct BoundaryResult {
    double rho_star = 0.0;
    double vartheta = 0.0, b = 0.0, c = 0.0;
    FeasibilityReport at_boundary;
};

// For every grid point, bisect rho over (rho_lo, 1/6) for the largest value
// that stays feasible, then report the best grid point. Grid order and the
// strict max make the result deterministic. If nothing is feasible even at
// the most favorable probe rho_lo, raises the empty-feasible-set signal
// carrying the best h seen there.
inline BoundaryResult search_boundary_rho(const std::vector<double>& vartheta_grid,
                                          const std::vector<double>& b_grid,
                                          const std::vector<double>& c_grid,
                                          F2Mode mode = F2Mode::clamp, bool harman = false,
                                          const SieveConstants& k = default_constants(),
                                          double rho_lo = 1e-4,
                                          long long budget = kDefaultQuadBudget) {
    if (vartheta_grid.empty() || b_grid.empty() || c_grid.empty())
        throw domain_error("search_boundary_rho: empty grid");
    constexpr int kBisectSteps = 16;
    const double rho_hi = 1.0 / 6.0;
    JCache cache;

    bool any = false;
    BoundaryResult best;
    double best_probe_h = -std::numeric_limits<double>::infinity();
    for (double vt : vartheta_grid)
        for (double b : b_grid)
            for (double c : c_grid) {
                FeasibilityReport probe;
                try {
                    probe = admissible(rho_lo, vt, b, c, mode, harman, k, &cache, budget);
                } catch (const domain_error&) {
                    continue;  // grid point invalid at the probe, skip it
                }
                if (probe.h_evaluated && probe.h_max > best_probe_h)
                    best_probe_h = probe.h_max;
                if (!probe.feasible) continue;

                double lo = rho_lo, hi = rho_hi;
                FeasibilityReport at_lo = probe;
                for (int step = 0; step < kBisectSteps; ++step) {
                    const double mid = 0.5 * (lo + hi);
                    FeasibilityReport at_mid;
                    bool mid_ok = false;
                    try {
                        at_mid = admissible(mid, vt, b, c, mode, harman, k, &cache, budget);
                        mid_ok = at_mid.feasible;
                    } catch (const domain_error&) {
                        mid_ok = false;
                    }
                    if (mid_ok) {
                        lo = mid;
                        at_lo = at_mid;
                    } else {
                        hi = mid;
                    }
                }
                if (!any || lo > best.rho_star) {
                    any = true;
                    best = {lo, vt, b, c, at_lo};
                }
            }
    if (!any)
        throw empty_feasible_set_error("search_boundary_rho: no grid point feasible at probe rho",
                                       rho_lo, best_probe_h);
    return best;
}

// Parameter arithmetic for the floor-power prime variant.
struct PsParams {
    double c_exp = 0.0;
    double gamma_c = 0.0;  // 1/c_exp
    double rho_ps = 0.0;
    double theta3 = 0.0;   // (1 + 9(gamma_c - 1))/12 - rho_ps
    long long r = 0;
};

inline constexpr double kPsExponentSup = 755.0 / 662.0;

inline double ps_rho(double c_exp) {
    if (!(c_exp > 1.0 && c_exp < kPsExponentSup))
        throw domain_error(detail::with_value("ps_rho: c outside (1, 755/662)", c_exp));
    return (1.0 + 9.0 * (1.0 / c_exp - 1.0)) / 12.0 - c_exp / (13.0 - 0.144);
}

inline PsParams make_ps_params(double c_exp, long long r,
                               std::optional<double> rho_override = {}) {
    PsParams ps;
    ps.c_exp = c_exp;
    ps.gamma_c = 1.0 / c_exp;
    ps.rho_ps = rho_override ? *rho_override : ps_rho(c_exp);
    if (!(c_exp > 1.0 && c_exp < kPsExponentSup))
        throw domain_error(detail::with_value("make_ps_params: c outside (1, 755/662)", c_exp));
    ps.theta3 = (1.0 + 9.0 * (ps.gamma_c - 1.0)) / 12.0 - ps.rho_ps;
    ps.r = r;
    return ps;
}

struct LabordeMargin {
    double margin = 0.0;  // c/theta3 - (r - 0.144); pass means <= 0
    bool pass = false;
};

inline LabordeMargin laborde_bound(const PsParams& ps) {
    if (!(ps.theta3 > 0.0))
        throw domain_error(detail::with_value("laborde_bound: theta3 <= 0", ps.theta3));
    LabordeMargin m;
    m.margin = ps.c_exp / ps.theta3 - (double(ps.r) - 0.144);
    m.pass = m.margin <= 0.0;
    return m;
}

}  // namespace sievelab
