#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sievelab {

namespace detail {

// "<msg>, value = <x>" with enough digits to reproduce the failing call.
inline std::string with_value(const char* msg, double x) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s, value = %.17g", msg, x);
    return std::string(buf);
}

}  // namespace detail

// Argument outside a function's mathematical domain. The message names the
// function and the offending value so nested evaluations stay debuggable.
struct domain_error : std::domain_error {
    explicit domain_error(const std::string& msg) : std::domain_error(msg) {}
};

// Input exceeds a documented size cap (sieve limit, factorization range, ...).
struct capacity_error : std::runtime_error {
    explicit capacity_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A floating-point decision could not be settled even at escalated precision.
struct precision_error : std::runtime_error {
    explicit precision_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Adaptive quadrature ran out of its evaluation budget. Carries the partial
// accumulation so callers can report how far it got.
struct budget_error : std::runtime_error {
    budget_error(const std::string& msg, double partial_value,
                 double partial_error, long long evaluations)
        : std::runtime_error(msg),
          partial_value(partial_value),
          partial_error(partial_error),
          evaluations(evaluations) {}
    double partial_value;
    double partial_error;
    long long evaluations;
};

// Bad run configuration (unknown keys, malformed values, ...).
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg, std::vector<std::string> keys = {})
        : std::runtime_error(msg), offending_keys(std::move(keys)) {}
    std::vector<std::string> offending_keys;
};

// No continued-fraction convergent lands in the requested denominator window.
struct no_convergent_error : std::runtime_error {
    explicit no_convergent_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A parameter scan found nothing admissible even at its most favorable probe.
struct empty_feasible_set_error : std::runtime_error {
    empty_feasible_set_error(const std::string& msg, double probe_rho, double best_h)
        : std::runtime_error(msg), probe_rho(probe_rho), best_h(best_h) {}
    double probe_rho;
    double best_h;
};

}  // namespace sievelab
