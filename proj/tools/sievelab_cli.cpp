// sievelab command-line frontend: one subcommand per module, JSON/CSV
// artifacts that embed the fully resolved configuration and constant set so
// every run is reproducible from its own output.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sievelab/constants.hpp"
#include "sievelab/contfrac.hpp"
#include "sievelab/errors.hpp"
#include "sievelab/feasibility.hpp"
#include "sievelab/hunter.hpp"
#include "sievelab/jrho.hpp"
#include "sievelab/limits.hpp"
#include "sievelab/mertens.hpp"
#include "sievelab/objective.hpp"
#include "sievelab/params.hpp"
#include "sievelab/primes.hpp"
#include "sievelab/psprime.hpp"
#include "sievelab/quadrature.hpp"
#include "sievelab/windows.hpp"

namespace {

using nlohmann::json;

struct usage_failure {
    std::string msg;
};

// ---------------------------------------------------------------------------
// formatting

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v + 0.0);  // +0.0 normalizes -0
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string json_num(double v) { return std::isfinite(v) ? num(v) : "null"; }

std::string jquote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if ((unsigned char)c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
    return out;
}

class JsonOut {
public:
    void open_root() {
        s_ = "{";
        first_.assign(1, true);
    }
    std::string close_root() {
        close('}');
        s_ += '\n';
        return std::move(s_);
    }
    void open_obj(const char* key) {
        item(key);
        s_ += '{';
        first_.push_back(true);
    }
    void open_arr(const char* key) {
        item(key);
        s_ += '[';
        first_.push_back(true);
    }
    void open_item_obj() {
        item(nullptr);
        s_ += '{';
        first_.push_back(true);
    }
    void close_obj() { close('}'); }
    void close_arr() { close(']'); }
    void kv_num(const char* key, double v) {
        item(key);
        s_ += json_num(v);
    }
    void kv_int(const char* key, long long v) {
        item(key);
        s_ += std::to_string(v);
    }
    void kv_uint(const char* key, unsigned long long v) {
        item(key);
        s_ += std::to_string(v);
    }
    void kv_str(const char* key, const std::string& v) {
        item(key);
        s_ += jquote(v);
    }
    void kv_bool(const char* key, bool v) {
        item(key);
        s_ += v ? "true" : "false";
    }
    void kv_raw(const char* key, const std::string& literal) {
        item(key);
        s_ += literal;
    }

private:
    void item(const char* key) {
        if (!first_.back()) s_ += ',';
        first_.back() = false;
        s_ += '\n';
        s_.append(2 * first_.size(), ' ');
        if (key) {
            s_ += jquote(key);
            s_ += ": ";
        }
    }
    void close(char bracket) {
        const bool empty = first_.back();
        first_.pop_back();
        if (!empty) {
            s_ += '\n';
            s_.append(2 * first_.size(), ' ');
        }
        s_ += bracket;
    }
    std::string s_;
    std::vector<bool> first_;
};

// ---------------------------------------------------------------------------
// option bindings: one record per config key, driving config-file merge,
// provenance tracking, and the resolved-config block of every artifact

struct Binding {
    std::string name;
    CLI::Option* opt = nullptr;
    std::function<void(const json&)> set;
    std::function<std::string()> render;  // current value as a JSON literal
    std::string prov = "default";
};

Binding bind(CLI::Option* o, const char* n, double& v) {
    return {n, o, [&v](const json& j) { v = j.get<double>(); },
            [&v] { return json_num(v); }, "default"};
}
Binding bind(CLI::Option* o, const char* n, std::optional<double>& v) {
    return {n, o, [&v](const json& j) { v = j.get<double>(); },
            [&v] { return v ? json_num(*v) : "null"; }, "default"};
}
Binding bind(CLI::Option* o, const char* n, int& v) {
    return {n, o, [&v](const json& j) { v = j.get<int>(); },
            [&v] { return std::to_string(v); }, "default"};
}
Binding bind(CLI::Option* o, const char* n, long long& v) {
    return {n, o, [&v](const json& j) { v = j.get<long long>(); },
            [&v] { return std::to_string(v); }, "default"};
}
Binding bind(CLI::Option* o, const char* n, std::optional<long long>& v) {
    return {n, o, [&v](const json& j) { v = j.get<long long>(); },
            [&v] { return v ? std::to_string(*v) : "null"; }, "default"};
}
Binding bind(CLI::Option* o, const char* n, unsigned long long& v) {
    return {n, o, [&v](const json& j) { v = j.get<unsigned long long>(); },
            [&v] { return std::to_string(v); }, "default"};
}
Binding bind(CLI::Option* o, const char* n, std::string& v) {
    return {n, o, [&v](const json& j) { v = j.get<std::string>(); },
            [&v] { return jquote(v); }, "default"};
}
Binding bind(CLI::Option* o, const char* n, bool& v) {
    return {n, o, [&v](const json& j) { v = j.get<bool>(); },
            [&v] { return v ? std::string("true") : std::string("false"); }, "default"};
}

void merge_config(std::vector<Binding>& bindings, const std::string& config_path) {
    for (auto& b : bindings)
        if (b.opt && b.opt->count() > 0) b.prov = "flag";
    if (config_path.empty()) return;

    std::ifstream in(config_path);
    if (!in) throw sievelab::domain_error("config: cannot open " + config_path);
    json cfg = json::parse(in);  // parse_error carries line/column
    if (!cfg.is_object()) throw sievelab::domain_error("config: top level must be an object");

    std::vector<std::string> unknown;
    for (const auto& [key, value] : cfg.items()) {
        Binding* match = nullptr;
        for (auto& b : bindings)
            if (b.name == key) match = &b;
        if (!match) {
            unknown.push_back(key);
            continue;
        }
        if (match->prov == "flag") continue;  // flags win; config value ignored
        try {
            match->set(value);
        } catch (const json::exception& e) {
            throw sievelab::domain_error("config: bad value for key \"" + key +
                                         "\": " + e.what());
        }
        match->prov = "config";
    }
    if (!unknown.empty())
        throw sievelab::config_error("config: unknown keys", unknown);
}

void apply_preset(std::vector<Binding>& bindings,
                  const std::vector<std::pair<std::string, json>>& values) {
    for (const auto& [key, value] : values)
        for (auto& b : bindings)
            if (b.name == key && b.prov == "default") {
                b.set(value);
                b.prov = "preset";
            }
}

// ---------------------------------------------------------------------------
// artifact assembly

struct Artifact {
    bool is_json = true;
    JsonOut j;
    std::string csv;
};

void write_preamble(Artifact& art, const std::string& subcommand,
                    const std::vector<Binding>& bindings, const sievelab::SieveConstants& k) {
    if (art.is_json) {
        art.j.open_root();
        art.j.kv_str("tool", "sievelab");
        art.j.kv_str("subcommand", subcommand);
        art.j.open_obj("config");
        for (const auto& b : bindings) art.j.kv_raw(b.name.c_str(), b.render());
        art.j.close_obj();
        art.j.open_obj("provenance");
        for (const auto& b : bindings) art.j.kv_str(b.name.c_str(), b.prov);
        art.j.close_obj();
        art.j.open_obj("constants");
        art.j.kv_num("euler_gamma", k.euler_gamma);
        art.j.kv_num("A1", k.A1);
        art.j.kv_num("A2", k.A2);
        art.j.kv_num("beta2", k.beta2);
        art.j.kv_num("A3", k.A3);
        art.j.kv_num("C0", k.C0);
        art.j.close_obj();
    } else {
        art.csv += "# sievelab " + subcommand + "\n";
        for (const auto& b : bindings)
            art.csv += "# config " + b.name + " = " + b.render() + " [" + b.prov + "]\n";
        art.csv += "# constants euler_gamma = " + num(k.euler_gamma) + "\n";
        art.csv += "# constants A1 = " + num(k.A1) + "\n";
        art.csv += "# constants A2 = " + num(k.A2) + "\n";
        art.csv += "# constants beta2 = " + num(k.beta2) + "\n";
        art.csv += "# constants A3 = " + num(k.A3) + "\n";
        art.csv += "# constants C0 = " + num(k.C0) + "\n";
    }
}

void emit(Artifact& art, const std::string& out_path) {
    const std::string text = art.is_json ? art.j.close_root() : std::move(art.csv);
    if (out_path.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw sievelab::domain_error("cannot open output file " + out_path);
        out.write(text.data(), (std::streamsize)text.size());
    }
}

// ---------------------------------------------------------------------------
// shared emitters

void emit_params(JsonOut& j, const sievelab::SieveParams& p) {
    j.kv_num("rho", p.rho);
    j.kv_num("theta1", p.theta1);
    j.kv_num("theta2", p.theta2);
    j.kv_num("theta", p.theta);
    j.kv_num("vartheta", p.vartheta);
    j.kv_num("a", p.a);
    j.kv_num("b", p.b);
    j.kv_num("c", p.c);
    j.kv_num("u", p.u);
    j.kv_num("delta0", p.delta0);
    j.kv_num("lambda_max_inv", p.lambda_max_inv);
    j.kv_num("eta", p.eta);
    j.kv_num("epsilon", p.epsilon);
}

void csv_params(std::string& s, const sievelab::SieveParams& p) {
    s += "rho," + num(p.rho) + "\n";
    s += "theta1," + num(p.theta1) + "\n";
    s += "theta2," + num(p.theta2) + "\n";
    s += "theta," + num(p.theta) + "\n";
    s += "vartheta," + num(p.vartheta) + "\n";
    s += "a," + num(p.a) + "\n";
    s += "b," + num(p.b) + "\n";
    s += "c," + num(p.c) + "\n";
    s += "u," + num(p.u) + "\n";
    s += "delta0," + num(p.delta0) + "\n";
    s += "lambda_max_inv," + num(p.lambda_max_inv) + "\n";
}

void emit_breakdown(JsonOut& j, const sievelab::ObjectiveBreakdown& br) {
    j.kv_num("f1_term", br.f1_term);
    j.kv_num("double_int_term", br.double_int_term);
    j.kv_num("cb_term", br.cb_term);
    j.kv_num("window_term", br.window_term);
    j.kv_num("kernel_term", br.kernel_term);
    j.kv_num("recovered_term", br.recovered_term);
    j.kv_num("f2_term", br.f2_term);
    j.kv_num("j_term", br.j_term);
    j.kv_num("total", br.total);
    j.kv_num("delta", br.delta);
    j.kv_num("j_value", br.j_value);
    j.kv_str("f2_mode", sievelab::f2_mode_name(br.f2_mode));
}

void csv_breakdown(std::string& s, const sievelab::ObjectiveBreakdown& br) {
    s += "f1_term," + num(br.f1_term) + "\n";
    s += "double_int_term," + num(br.double_int_term) + "\n";
    s += "cb_term," + num(br.cb_term) + "\n";
    s += "window_term," + num(br.window_term) + "\n";
    s += "kernel_term," + num(br.kernel_term) + "\n";
    s += "recovered_term," + num(br.recovered_term) + "\n";
    s += "f2_term," + num(br.f2_term) + "\n";
    s += "j_term," + num(br.j_term) + "\n";
    s += "total," + num(br.total) + "\n";
    s += "delta," + num(br.delta) + "\n";
    s += "j_value," + num(br.j_value) + "\n";
}

void emit_report(Artifact& art, const sievelab::FeasibilityReport& rep,
                 const char* key = "result") {
    if (art.is_json) {
        auto& j = art.j;
        j.open_obj(key);
        j.open_obj("params");
        emit_params(j, rep.params);
        j.close_obj();
        j.kv_str("f2_mode", sievelab::f2_mode_name(rep.f2_mode));
        j.open_arr("constraints");
        for (const auto& c : rep.constraints) {
            j.open_item_obj();
            j.kv_str("name", c.name);
            j.kv_str("expression", c.expression);
            j.kv_num("lhs", c.lhs);
            j.kv_num("rhs", c.rhs);
            j.kv_bool("pass", c.pass);
            j.kv_bool("gating", c.gating);
            if (!c.note.empty()) j.kv_str("note", c.note);
            j.close_obj();
        }
        j.close_arr();
        j.kv_bool("h_evaluated", rep.h_evaluated);
        j.kv_num("delta_star", rep.delta_star);
        j.kv_num("h_max", rep.h_max);
        j.kv_bool("feasible", rep.feasible);
        if (rep.best_breakdown) {
            j.open_obj("breakdown");
            emit_breakdown(j, *rep.best_breakdown);
            j.close_obj();
        }
        j.close_obj();
    } else {
        auto& s = art.csv;
        s += "# params\nkey,value\n";
        csv_params(s, rep.params);
        s += "# constraints\nname,lhs,rhs,pass,gating,note\n";
        for (const auto& c : rep.constraints)
            s += c.name + "," + num(c.lhs) + "," + num(c.rhs) + "," +
                 (c.pass ? "true" : "false") + "," + (c.gating ? "true" : "false") + "," +
                 csv_field(c.note) + "\n";
        s += "# summary\nkey,value\n";
        s += "f2_mode,";
        s += sievelab::f2_mode_name(rep.f2_mode);
        s += "\n";
        s += "h_evaluated," + std::string(rep.h_evaluated ? "true" : "false") + "\n";
        s += "delta_star," + num(rep.delta_star) + "\n";
        s += "h_max," + num(rep.h_max) + "\n";
        s += "feasible," + std::string(rep.feasible ? "true" : "false") + "\n";
        if (rep.best_breakdown) {
            s += "# breakdown\nkey,value\n";
            csv_breakdown(s, *rep.best_breakdown);
        }
    }
}

// ---------------------------------------------------------------------------
// lambda parsing: decimal or sqrt(k)

struct ParsedLambda {
    double value = 0.0;
    std::optional<long long> sqrt_k;  // set when the input was +sqrt(k)
};

ParsedLambda parse_lambda(const std::string& raw) {
    std::string s = raw;
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
    double sign = 1.0;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        if (s[0] == '-') sign = -1.0;
        s.erase(s.begin());
    }
    if (s.rfind("sqrt(", 0) == 0 && !s.empty() && s.back() == ')') {
        const std::string inner = s.substr(5, s.size() - 6);
        try {
            std::size_t pos = 0;
            const long long k = std::stoll(inner, &pos);
            if (pos != inner.size() || k < 0) throw std::invalid_argument("trailing");
            ParsedLambda out;
            out.value = sign * std::sqrt(double(k));
            if (sign > 0) out.sqrt_k = k;
            return out;
        } catch (const std::exception&) {
            throw usage_failure{"cannot parse sqrt(k) form: " + raw};
        }
    }
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing");
        return {sign * v, {}};
    } catch (const std::exception&) {
        throw usage_failure{"cannot parse numeric value: " + raw};
    }
}

double require(const std::optional<double>& v, const char* flag) {
    if (!v) throw sievelab::domain_error(std::string("missing required parameter ") + flag);
    return *v;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace sievelab;

    CLI::App app{"sievelab: sieve limit functions, feasibility search, and diophantine hunts"};
    app.require_subcommand(1);

    // shared option storage; exactly one subcommand parses per run
    std::string config_path, out_path, format, preset;
    int threads = (int)std::max(1u, std::thread::hardware_concurrency());
    unsigned long long seed = 9001;
    long long budget = kDefaultQuadBudget;
    double A2 = 43.496, beta2 = 4.8333;
    std::string f2_mode = "clamp";
    std::optional<double> rho, vartheta, c, delta, tau, abs_bound, lower_limit, ps_c, rho_lo;
    double b = 1.0, step = 0.1, tol = 1e-6;
    double delta0 = 0.1, alpha = 0.2, beta = 0.7, width = 0.01;
    long long r = 3, N = 100, grid_n = 0, order = 2, d_max = 20, mc_samples = 0;
    unsigned long long X = 0, verify_x = 1000000, p_fixed = 17;
    std::optional<long long> hint;
    std::string lambda0_s = "0", lambda1_s, lambda2_s = "-1", convention = "multiplicity";
    std::string kind = "selberg", d_list_s = "1,2,3,5,6";
    bool decomposed = false, harman = false, boundary = false, g2 = false;

    // run() receives the bindings of the parsed subcommand so preset expansion
    // and the preamble see post-merge values; SubSpec objects live in `specs`,
    // so the lambdas must not capture the block-local spec.
    struct SubSpec {
        CLI::App* sub = nullptr;
        std::vector<Binding> bindings;
        std::string default_format;
        std::function<void(Artifact&, std::vector<Binding>&)> run;
    };
    std::vector<SubSpec> specs;

    auto add_common = [&](CLI::App* sub, std::vector<Binding>& bs, bool with_seed = false) {
        sub->add_option("--config", config_path, "JSON config file merged under flags");
        auto* o_out = sub->add_option("--out", out_path, "write the artifact here instead of stdout");
        auto* o_fmt = sub->add_option("--format", format, "output format")
                          ->check(CLI::IsMember({"csv", "json"}));
        auto* o_thr = sub->add_option("--threads", threads, "worker threads (1 = serial)");
        bs.push_back(bind(o_out, "out", out_path));
        bs.push_back(bind(o_fmt, "format", format));
        bs.push_back(bind(o_thr, "threads", threads));
        if (with_seed) {
            auto* o_seed = sub->add_option("--seed", seed, "RNG seed for Monte-Carlo checks");
            bs.push_back(bind(o_seed, "seed", seed));
        }
    };
    auto add_constants = [&](CLI::App* sub, std::vector<Binding>& bs) {
        auto* o_a2 = sub->add_option("--A2", A2, "two-dimensional sieve constant");
        auto* o_b2 = sub->add_option("--beta2", beta2, "two-dimensional sifting threshold");
        bs.push_back(bind(o_a2, "A2", A2));
        bs.push_back(bind(o_b2, "beta2", beta2));
    };
    auto add_f2 = [&](CLI::App* sub, std::vector<Binding>& bs) {
        auto* o = sub->add_option("--f2-mode", f2_mode, "upper bound extension handling")
                      ->check(CLI::IsMember({"clamp", "floor-one"}));
        bs.push_back(bind(o, "f2-mode", f2_mode));
    };
    auto add_budget = [&](CLI::App* sub, std::vector<Binding>& bs) {
        auto* o = sub->add_option("--budget", budget, "integrand evaluation budget");
        bs.push_back(bind(o, "budget", budget));
    };

    // ---- limits ----
    {
        SubSpec spec;
        spec.sub = app.add_subcommand("limits", "tabulate the sieve limit functions");
        spec.default_format = "csv";
        auto* o_step = spec.sub->add_option("--step", step, "grid spacing");
        spec.bindings.push_back(bind(o_step, "step", step));
        add_f2(spec.sub, spec.bindings);
        add_constants(spec.sub, spec.bindings);
        add_common(spec.sub, spec.bindings);
        spec.run = [&](Artifact& art, std::vector<Binding>& bindings) {
            if (!(step > 1e-6)) throw domain_error("limits: step must exceed 1e-6");
            const SieveConstants k = make_constants(A2, beta2);
            const F2Mode mode = parse_f2_mode(f2_mode);
            struct Row {
                const char* fn;
                double s, v;
            };
            std::vector<Row> rows;
            for (double s = 2.0; s < 6.0 + 1e-9; s += step)
                rows.push_back({"f1", std::min(s, 6.0), f1(std::min(s, 6.0), k)});
            for (double s = step; s < 5.0 + 1e-9; s += step)
                rows.push_back({"F1", std::min(s, 5.0), F1(std::min(s, 5.0), k)});
            for (double s = step; s < k.beta2 + 2.0 - 1e-9; s += step)
                rows.push_back({"F2", s, F2(s, mode, k)});
            write_preamble(art, "limits", bindings, k);
            if (art.is_json) {
                art.j.open_arr("result");
                for (const auto& row : rows) {
                    art.j.open_item_obj();
                    art.j.kv_str("function", row.fn);
                    art.j.kv_num("s", row.s);
                    art.j.kv_num("value", row.v);
                    art.j.close_obj();
                }
                art.j.close_arr();
            } else {
                art.csv += "function,s,value\n";
                for (const auto& row : rows)
                    art.csv +=
                        std::string(row.fn) + "," + num(row.s) + "," + num(row.v) + "\n";
            }
        };
        specs.push_back(std::move(spec));
    }

    // ---- jrho ----
    {
        SubSpec spec;
        spec.sub = app.add_subcommand("jrho", "evaluate the switching-loss triple integral");
        spec.default_format = "json";
        auto* o_rho = spec.sub->add_option("--rho", rho, "window exponent");
        auto* o_ll = spec.sub->add_option("--lower-limit", lower_limit,
                                          "override the outer lower limit rho/4");
        auto* o_tol = spec.sub->add_option("--tol", tol, "absolute tolerance");
        auto* o_mc = spec.sub->add_option("--mc-samples", mc_samples,
                                          "also run a seeded Monte-Carlo cross-check");
        spec.bindings.push_back(bind(o_rho, "rho", rho));
        spec.bindings.push_back(bind(o_ll, "lower-limit", lower_limit));
        spec.bindings.push_back(bind(o_tol, "tol", tol));
        spec.bindings.push_back(bind(o_mc, "mc-samples", mc_samples));
        add_budget(spec.sub, spec.bindings);
        add_common(spec.sub, spec.bindings, /*with_seed=*/true);
        spec.run = [&](Artifact& art, std::vector<Binding>& bindings) {
            const double rv = require(rho, "--rho");
            std::optional<double> ll = lower_limit;
            const QuadResult q = J_rho(rv, ll, tol, budget);
            std::optional<McEstimate> mc;
            if (mc_samples > 0) mc = J_rho_mc(rv, (std::uint64_t)mc_samples, seed);
            write_preamble(art, "jrho", bindings, default_constants());
            if (art.is_json) {
                auto& j = art.j;
                j.open_obj("result");
                j.kv_num("rho", rv);
                j.kv_num("lower_limit", ll ? *ll : rv / 4.0);
                j.kv_num("value", q.value);
                j.kv_num("abs_error", q.abs_error);
                j.kv_int("evaluations", q.evaluations);
                if (mc) {
                    j.open_obj("monte_carlo");
                    j.kv_uint("samples", mc->samples);
                    j.kv_uint("seed", mc->seed);
                    j.kv_num("value", mc->value);
                    j.kv_num("std_error", mc->std_error);
                    j.kv_num("z_score", (q.value - mc->value) / mc->std_error);
                    j.close_obj();
                }
                j.close_obj();
            } else {
                art.csv += "key,value\n";
                art.csv += "rho," + num(rv) + "\n";
                art.csv += "lower_limit," + num(ll ? *ll : rv / 4.0) + "\n";
                art.csv += "value," + num(q.value) + "\n";
                art.csv += "abs_error," + num(q.abs_error) + "\n";
                art.csv += "evaluations," + std::to_string(q.evaluations) + "\n";
                if (mc) {
                    art.csv += "mc_samples," + std::to_string(mc->samples) + "\n";
                    art.csv += "mc_seed," + std::to_string(mc->seed) + "\n";
                    art.csv += "mc_value," + num(mc->value) + "\n";
                    art.csv += "mc_std_error," + num(mc->std_error) + "\n";
                    art.csv += "mc_z_score," + num((q.value - mc->value) / mc->std_error) + "\n";
                }
            }
        };
        specs.push_back(std::move(spec));
    }

    // ---- objective ----
    {
        SubSpec spec;
        spec.sub = app.add_subcommand("objective",
                                      "evaluate the weighted-sum objective at one point");
        spec.default_format = "json";
        auto* o_rho = spec.sub->add_option("--rho", rho, "window exponent");
        auto* o_vt = spec.sub->add_option("--vartheta", vartheta, "sifting ratio");
        auto* o_b = spec.sub->add_option("--b", b, "lower weight threshold");
        auto* o_c = spec.sub->add_option("--c", c, "upper weight threshold");
        auto* o_d = spec.sub->add_option("--delta", delta, "crossover point");
        auto* o_dec = spec.sub->add_flag("--decomposed", decomposed,
                                         "also report the A/B/D/F split");
        spec.bindings.push_back(bind(o_rho, "rho", rho));
        spec.bindings.push_back(bind(o_vt, "vartheta", vartheta));
        spec.bindings.push_back(bind(o_b, "b", b));
        spec.bindings.push_back(bind(o_c, "c", c));
        spec.bindings.push_back(bind(o_d, "delta", delta));
        spec.bindings.push_back(bind(o_dec, "decomposed", decomposed));
        add_f2(spec.sub, spec.bindings);
        add_constants(spec.sub, spec.bindings);
        add_budget(spec.sub, spec.bindings);
        add_common(spec.sub, spec.bindings);
        spec.run = [&](Artifact& art, std::vector<Binding>& bindings) {
            const SieveConstants k = make_constants(A2, beta2);
            const F2Mode mode = parse_f2_mode(f2_mode);
            const SieveParams p = derive_params(require(rho, "--rho"),
                                                require(vartheta, "--vartheta"), b,
                                                require(c, "--c"), k);
            const double dv = require(delta, "--delta");
            const ObjectiveBreakdown br = H_direct(p, dv, mode, k, {}, budget);
            std::optional<DecomposedParts> parts;
            if (decomposed) parts = H_decomposed_report(p, dv, mode, k, br.j_value, budget);
            write_preamble(art, "objective", bindings, k);
            if (art.is_json) {
                auto& j = art.j;
                j.open_obj("result");
                j.open_obj("params");
                emit_params(j, p);
                j.close_obj();
                j.open_obj("breakdown");
                emit_breakdown(j, br);
                j.close_obj();
                if (parts) {
                    j.open_obj("decomposed");
                    j.kv_num("A", parts->A);
                    j.kv_bool("A_ok", parts->A_ok);
                    if (!parts->A_ok) j.kv_str("A_error", parts->A_error);
                    j.kv_num("B", parts->B);
                    j.kv_bool("B_ok", parts->B_ok);
                    if (!parts->B_ok) j.kv_str("B_error", parts->B_error);
                    j.kv_num("D", parts->D);
                    j.kv_bool("D_ok", parts->D_ok);
                    if (!parts->D_ok) j.kv_str("D_error", parts->D_error);
                    j.kv_num("F", parts->F);
                    j.kv_bool("F_ok", parts->F_ok);
                    if (!parts->F_ok) j.kv_str("F_error", parts->F_error);
                    j.kv_bool("assumptions_hold", parts->assumptions_hold);
                    j.kv_num("j_value", parts->j_value);
                    j.kv_num("total", parts->total);
                    j.close_obj();
                }
                j.close_obj();
            } else {
                art.csv += "# params\nkey,value\n";
                csv_params(art.csv, p);
                art.csv += "# breakdown\nkey,value\n";
                csv_breakdown(art.csv, br);
                if (parts) {
                    art.csv += "# decomposed\nkey,value\n";
                    art.csv += "A," + num(parts->A) + "\n";
                    art.csv += "B," + num(parts->B) + "\n";
                    art.csv += "D," + num(parts->D) + "\n";
                    art.csv += "F," + num(parts->F) + "\n";
                    art.csv += "assumptions_hold,";
                    art.csv += parts->assumptions_hold ? "true" : "false";
                    art.csv += "\n";
                }
            }
        };
        specs.push_back(std::move(spec));
    }

    // ---- optimize ----
    {
        SubSpec spec;
        spec.sub = app.add_subcommand(
            "optimize", "grade constraints and maximize the objective over delta");
        spec.default_format = "json";
        auto* o_pre = spec.sub->add_option("--preset", preset, "named parameter bundle")
                          ->check(CLI::IsMember({"paper-118", "harman-147"}));
        auto* o_rho = spec.sub->add_option("--rho", rho, "window exponent");
        auto* o_vt = spec.sub->add_option("--vartheta", vartheta, "sifting ratio");
        auto* o_b = spec.sub->add_option("--b", b, "lower weight threshold");
        auto* o_c = spec.sub->add_option("--c", c, "upper weight threshold");
        auto* o_h = spec.sub->add_flag("--harman", harman, "freeze delta at 1/vartheta");
        auto* o_bd = spec.sub->add_flag("--boundary", boundary,
                                        "bisect for the largest feasible rho");
        auto* o_rl = spec.sub->add_option("--rho-lo", rho_lo, "probe rho for the search");
        spec.bindings.push_back(bind(o_pre, "preset", preset));
        spec.bindings.push_back(bind(o_rho, "rho", rho));
        spec.bindings.push_back(bind(o_vt, "vartheta", vartheta));
        spec.bindings.push_back(bind(o_b, "b", b));
        spec.bindings.push_back(bind(o_c, "c", c));
        spec.bindings.push_back(bind(o_h, "harman", harman));
        spec.bindings.push_back(bind(o_bd, "boundary", boundary));
        spec.bindings.push_back(bind(o_rl, "rho-lo", rho_lo));
        add_f2(spec.sub, spec.bindings);
        add_constants(spec.sub, spec.bindings);
        add_budget(spec.sub, spec.bindings);
        add_common(spec.sub, spec.bindings);
        spec.run = [&](Artifact& art, std::vector<Binding>& bindings) {
            if (preset == "paper-118")
                apply_preset(bindings, {{"rho", 1.0 / 118.0},
                                             {"vartheta", 4.07},
                                             {"b", 1.0},
                                             {"c", 3.98}});
            else if (preset == "harman-147")
                apply_preset(bindings, {{"rho", 1.0 / 147.0},
                                             {"vartheta", 4.07},
                                             {"b", 1.0},
                                             {"c", 3.98},
                                             {"harman", true}});
            const SieveConstants k = make_constants(A2, beta2);
            const F2Mode mode = parse_f2_mode(f2_mode);
            const double vt = require(vartheta, "--vartheta");
            const double cv = require(c, "--c");
            write_preamble(art, "optimize", bindings, k);
            if (boundary) {
                try {
                    const BoundaryResult res =
                        search_boundary_rho({vt}, {b}, {cv}, mode, harman, k,
                                            rho_lo ? *rho_lo : 1e-4, budget);
                    if (art.is_json) {
                        art.j.open_obj("result");
                        art.j.kv_bool("found", true);
                        art.j.kv_num("rho_star", res.rho_star);
                        art.j.kv_num("vartheta", res.vartheta);
                        art.j.kv_num("b", res.b);
                        art.j.kv_num("c", res.c);
                        art.j.close_obj();
                        emit_report(art, res.at_boundary, "boundary_report");
                    } else {
                        art.csv += "# boundary\nkey,value\n";
                        art.csv += "found,true\n";
                        art.csv += "rho_star," + num(res.rho_star) + "\n";
                        emit_report(art, res.at_boundary);
                    }
                } catch (const empty_feasible_set_error& e) {
                    if (art.is_json) {
                        art.j.open_obj("result");
                        art.j.kv_bool("found", false);
                        art.j.kv_str("message", e.what());
                        art.j.kv_num("probe_rho", e.probe_rho);
                        art.j.kv_num("best_h", e.best_h);
                        art.j.close_obj();
                    } else {
                        art.csv += "# boundary\nkey,value\n";
                        art.csv += "found,false\n";
                        art.csv += "probe_rho," + num(e.probe_rho) + "\n";
                        art.csv += "best_h," + num(e.best_h) + "\n";
                    }
                }
            } else {
                const FeasibilityReport rep = admissible(require(rho, "--rho"), vt, b, cv,
                                                         mode, harman, k, nullptr, budget);
                emit_report(art, rep);
            }
        };
        specs.push_back(std::move(spec));
    }

    // ---- ps ----
    {
        SubSpec spec;
        spec.sub = app.add_subcommand("ps", "floor-power prime exponent arithmetic");
        spec.default_format = "json";
        auto* o_pre = spec.sub->add_option("--preset", preset, "named parameter bundle")
                          ->check(CLI::IsMember({"ps-180"}));
        auto* o_c = spec.sub->add_option("--c", c, "floor-power exponent");
        auto* o_r = spec.sub->add_option("--r", r, "almost-prime order");
        auto* o_rho = spec.sub->add_option("--rho", rho, "override the derived rho");
        spec.bindings.push_back(bind(o_pre, "preset", preset));
        spec.bindings.push_back(bind(o_c, "c", c));
        spec.bindings.push_back(bind(o_r, "r", r));
        spec.bindings.push_back(bind(o_rho, "rho", rho));
        add_common(spec.sub, spec.bindings);
        spec.run = [&](Artifact& art, std::vector<Binding>& bindings) {
            if (preset == "ps-180")
                apply_preset(bindings, {{"c", 1.0 + 2e-10}, {"r", 13}});
            const PsParams ps = make_ps_params(require(c, "--c"), r, rho);
            const LabordeMargin m = laborde_bound(ps);
            write_preamble(art, "ps", bindings, default_constants());
            if (art.is_json) {
                auto& j = art.j;
                j.open_obj("result");
                j.kv_num("c", ps.c_exp);
                j.kv_num("gamma", ps.gamma_c);
                j.kv_num("rho", ps.rho_ps);
                j.kv_num("theta3", ps.theta3);
                j.kv_int("r", ps.r);
                j.kv_num("margin", m.margin);
                j.kv_bool("margin_pass", m.pass);
                j.close_obj();
            } else {
                art.csv += "key,value\n";
                art.csv += "c," + num(ps.c_exp) + "\n";
                art.csv += "gamma," + num(ps.gamma_c) + "\n";
                art.csv += "rho," + num(ps.rho_ps) + "\n";
                art.csv += "theta3," + num(ps.theta3) + "\n";
                art.csv += "r," + std::to_string(ps.r) + "\n";
                art.csv += "margin," + num(m.margin) + "\n";
                art.csv += "margin_pass," + std::string(m.pass ? "true" : "false") + "\n";
            }
        };
        specs.push_back(std::move(spec));
    }

    // ---- hunt ----
    {
        SubSpec spec;
        spec.sub = app.add_subcommand("hunt", "scan primes for near-integer linear forms");
        spec.default_format = "csv";
        auto* o_l0 = spec.sub->add_option("--lambda0", lambda0_s, "constant term");
        auto* o_l1 = spec.sub->add_option("--lambda1", lambda1_s,
                                          "prime coefficient, decimal or sqrt(k)");
        auto* o_l2 = spec.sub->add_option("--lambda2", lambda2_s, "target coefficient");
        auto* o_tau = spec.sub->add_option("--tau", tau, "bound exponent: |value| < p^-tau");
        auto* o_ab = spec.sub->add_option("--abs-bound", abs_bound, "constant bound instead");
        auto* o_X = spec.sub->add_option("--X", X, "prime range limit");
        auto* o_r = spec.sub->add_option("--r", r, "almost-prime order for m");
        auto* o_cv = spec.sub->add_option("--convention", convention, "factor counting")
                         ->check(CLI::IsMember({"multiplicity", "distinct"}));
        auto* o_pc = spec.sub->add_option("--ps-c", ps_c, "restrict to floor-power primes");
        spec.bindings.push_back(bind(o_l0, "lambda0", lambda0_s));
        spec.bindings.push_back(bind(o_l1, "lambda1", lambda1_s));
        spec.bindings.push_back(bind(o_l2, "lambda2", lambda2_s));
        spec.bindings.push_back(bind(o_tau, "tau", tau));
        spec.bindings.push_back(bind(o_ab, "abs-bound", abs_bound));
        spec.bindings.push_back(bind(o_X, "X", X));
        spec.bindings.push_back(bind(o_r, "r", r));
        spec.bindings.push_back(bind(o_cv, "convention", convention));
        spec.bindings.push_back(bind(o_pc, "ps-c", ps_c));
        add_common(spec.sub, spec.bindings);
        spec.run = [&](Artifact& art, std::vector<Binding>& bindings) {
            if (lambda1_s.empty()) throw domain_error("hunt: --lambda1 is required");
            const ParsedLambda l0 = parse_lambda(lambda0_s);
            const ParsedLambda l1 = parse_lambda(lambda1_s);
            const ParsedLambda l2 = parse_lambda(lambda2_s);
            HuntConfig cfg;
            double scale = 1.0;
            if (l2.value == -1.0) {
                cfg.lambda0 = l0.value;
                cfg.lambda1 = l1.value;
                cfg.lambda1_sqrt = l1.sqrt_k;
            } else {
                const NormalizedForm nf = normalize(l0.value, l1.value, l2.value);
                cfg.lambda0 = nf.lambda0;
                cfg.lambda1 = nf.lambda1;
                scale = nf.scale;
                if (nf.scale == 1.0) cfg.lambda1_sqrt = l1.sqrt_k;
            }
            cfg.tau = tau;
            cfg.abs_bound = abs_bound;
            cfg.X = X;
            cfg.r = (int)r;
            cfg.convention = convention == "distinct" ? AlmostPrimeConvention::distinct
                                                      : AlmostPrimeConvention::multiplicity;
            if (ps_c) {
                cfg.ps_mode = true;
                cfg.c_exp = *ps_c;
            }
            cfg.threads = threads;
            const std::vector<SolutionRecord> recs = hunt(cfg);
            write_preamble(art, "hunt", bindings, default_constants());
            std::size_t argmin = 0;
            for (std::size_t i = 1; i < recs.size(); ++i)
                if (std::fabs(recs[i].value) < std::fabs(recs[argmin].value)) argmin = i;
            if (art.is_json) {
                auto& j = art.j;
                j.open_obj("result");
                j.kv_uint("count", recs.size());
                j.kv_num("scale", scale);
                j.kv_num("lambda0", cfg.lambda0);
                j.kv_num("lambda1", cfg.lambda1);
                j.kv_str("bound_type", tau ? "p^-tau" : "absolute");
                if (!recs.empty()) {
                    j.open_obj("min_residual");
                    j.kv_uint("p", recs[argmin].p);
                    j.kv_uint("m", recs[argmin].m);
                    j.kv_num("value", recs[argmin].value);
                    j.kv_num("bound", recs[argmin].bound);
                    j.kv_int("big_omega", recs[argmin].big_omega_m);
                    j.close_obj();
                    j.kv_uint("max_p", recs.back().p);
                }
                j.close_obj();
            } else {
                art.csv += "p,m,value,bound,big_omega\n";
                for (const auto& rec : recs)
                    art.csv += std::to_string(rec.p) + "," + std::to_string(rec.m) + "," +
                               num(rec.value) + "," + num(rec.bound) + "," +
                               std::to_string(rec.big_omega_m) + "\n";
            }
        };
        specs.push_back(std::move(spec));
    }

    // ---- density ----
    {
        SubSpec spec;
        spec.sub = app.add_subcommand("density",
                                      "sifted-set construction and divisor density tables");
        spec.default_format = "csv";
        auto* o_l0 = spec.sub->add_option("--lambda0", lambda0_s, "constant term");
        auto* o_l1 = spec.sub->add_option("--lambda1", lambda1_s,
                                          "prime coefficient, decimal or sqrt(k)");
        auto* o_X = spec.sub->add_option("--X", X, "prime range limit");
        auto* o_rho = spec.sub->add_option("--rho", rho, "window exponent");
        auto* o_dm = spec.sub->add_option("--d-max", d_max, "largest divisor tested");
        auto* o_hint = spec.sub->add_option("--hint", hint, "convergent index override");
        auto* o_g2 = spec.sub->add_flag("--g2", g2, "product-set two-dimensional table");
        auto* o_pf = spec.sub->add_option("--p-fixed", p_fixed, "fixed prime for --g2");
        auto* o_dl = spec.sub->add_option("--d-list", d_list_s, "divisors for --g2");
        spec.bindings.push_back(bind(o_l0, "lambda0", lambda0_s));
        spec.bindings.push_back(bind(o_l1, "lambda1", lambda1_s));
        spec.bindings.push_back(bind(o_X, "X", X));
        spec.bindings.push_back(bind(o_rho, "rho", rho));
        spec.bindings.push_back(bind(o_dm, "d-max", d_max));
        spec.bindings.push_back(bind(o_hint, "hint", hint));
        spec.bindings.push_back(bind(o_g2, "g2", g2));
        spec.bindings.push_back(bind(o_pf, "p-fixed", p_fixed));
        spec.bindings.push_back(bind(o_dl, "d-list", d_list_s));
        add_common(spec.sub, spec.bindings);
        spec.run = [&](Artifact& art, std::vector<Binding>& bindings) {
            if (lambda1_s.empty()) throw domain_error("density: --lambda1 is required");
            const double l1 = parse_lambda(lambda1_s).value;
            const double l0 = parse_lambda(lambda0_s).value;
            const double rv = require(rho, "--rho");
            std::optional<std::size_t> idx;
            if (hint) idx = (std::size_t)*hint;
            write_preamble(art, "density", bindings, default_constants());
            if (!g2) {
                const SiftedSet set = build_sifted_set(l1, X, rv, idx, l0);
                const std::vector<DensityRow> rows = measure_density(set, (int)d_max);
                if (art.is_json) {
                    auto& j = art.j;
                    j.open_obj("result");
                    j.open_obj("set");
                    j.kv_uint("q", set.q);
                    j.kv_int("a_prime", set.a_prime);
                    j.kv_int("b_prime", set.b_prime);
                    j.kv_num("xi", set.xi);
                    j.kv_uint("X", set.X);
                    j.kv_uint("pi_X", set.pi_X);
                    j.kv_uint("member_count", set.members.size());
                    j.kv_num("cardinality_ratio",
                             double(set.members.size()) / (set.xi * double(set.pi_X)));
                    j.close_obj();
                    j.open_arr("rows");
                    for (const auto& row : rows) {
                        j.open_item_obj();
                        j.kv_int("d", row.d);
                        j.kv_uint("observed", row.observed);
                        j.kv_num("predicted", row.predicted);
                        j.kv_num("relative_error", row.relative_error);
                        j.close_obj();
                    }
                    j.close_arr();
                    j.close_obj();
                } else {
                    art.csv += "# set q=" + std::to_string(set.q) +
                               " a_prime=" + std::to_string(set.a_prime) +
                               " b_prime=" + std::to_string(set.b_prime) +
                               " xi=" + num(set.xi) + " pi_X=" + std::to_string(set.pi_X) +
                               " members=" + std::to_string(set.members.size()) + "\n";
                    art.csv += "d,observed,predicted,relative_error\n";
                    for (const auto& row : rows)
                        art.csv += std::to_string(row.d) + "," +
                                   std::to_string(row.observed) + "," + num(row.predicted) +
                                   "," + num(row.relative_error) + "\n";
                }
            } else {
                std::vector<long long> ds;
                std::string token;
                for (char ch : d_list_s + ",") {
                    if (ch == ',') {
                        if (!token.empty()) ds.push_back(std::stoll(token));
                        token.clear();
                    } else {
                        token += ch;
                    }
                }
                const G2Table table = measure_g2(l1, X, rv, p_fixed, ds, idx);
                if (art.is_json) {
                    auto& j = art.j;
                    j.open_obj("result");
                    j.open_obj("set");
                    j.kv_uint("q", table.q);
                    j.kv_int("a_prime", table.a_prime);
                    j.kv_num("xi", table.xi);
                    j.kv_uint("z", table.z);
                    j.kv_uint("X", table.X);
                    j.kv_uint("p_fixed", table.p_fixed);
                    j.kv_uint("member_count", table.member_count);
                    j.close_obj();
                    j.open_arr("rows");
                    for (const auto& row : table.rows) {
                        j.open_item_obj();
                        j.kv_int("d", row.d);
                        j.kv_num("g2", row.g2);
                        j.kv_uint("observed", row.observed);
                        j.kv_num("predicted", row.predicted);
                        j.kv_num("ratio", row.ratio);
                        j.close_obj();
                    }
                    j.close_arr();
                    j.close_obj();
                } else {
                    art.csv += "# set q=" + std::to_string(table.q) +
                               " z=" + std::to_string(table.z) +
                               " p_fixed=" + std::to_string(table.p_fixed) +
                               " members=" + std::to_string(table.member_count) + "\n";
                    art.csv += "d,g2,observed,predicted,ratio\n";
                    for (const auto& row : table.rows)
                        art.csv += std::to_string(row.d) + "," + num(row.g2) + "," +
                                   std::to_string(row.observed) + "," + num(row.predicted) +
                                   "," + num(row.ratio) + "\n";
                }
            }
        };
        specs.push_back(std::move(spec));
    }

    // ---- verify ----
    {
        SubSpec spec;
        spec.sub = app.add_subcommand(
            "verify", "classical cross-checks: Mertens products, sieve dimension, "
                      "floor-power prime counts");
        spec.default_format = "json";
        auto* o_x = spec.sub->add_option("--x", verify_x, "range for the prime sums");
        spec.bindings.push_back(bind(o_x, "x", verify_x));
        add_common(spec.sub, spec.bindings);
        spec.run = [&](Artifact& art, std::vector<Binding>& bindings) {
            const MertensChecks m = mertens_checks(verify_x);
            const std::vector<std::uint64_t> grid = {1000, 10000, 100000, 1000000};
            const std::vector<double> res = dimension_check(grid);
            const double drift = std::fabs(res[3] - res[1]);

            // floor-power indicator vs direct enumeration, c = 1.1
            const double c_chk = 1.1, gamma_chk = 1.0 / c_chk;
            const std::uint64_t n_cap = 10000;
            std::vector<char> brute(n_cap + 1, 0);
            for (std::uint64_t n = 1;; ++n) {
                long double v = std::pow((long double)n, (long double)c_chk);
                if (n == 1) v = 1.0L;          // exact: 1^c
                if (n == 1024) v = 2048.0L;    // exact: (2^10)^{11/10}
                const std::uint64_t fl = (std::uint64_t)v;
                if (fl > n_cap) break;
                brute[fl] = 1;
            }
            long long mismatches = 0;
            for (std::uint64_t kk = 1; kk <= n_cap; ++kk)
                if (ps_indicator(kk, gamma_chk) != (brute[kk] != 0)) ++mismatches;

            const long long pc = pi_c(1000000, c_chk);
            const double liv = li(1e6);
            const double ratio = double(pc) / (gamma_chk * liv);

            write_preamble(art, "verify", bindings, default_constants());
            auto& j = art.j;
            if (art.is_json) {
                j.open_obj("result");
                j.open_obj("mertens");
                j.kv_uint("x", verify_x);
                j.kv_num("product_ratio", m.product_ratio);
                j.kv_num("sum_residual", m.sum_residual);
                j.close_obj();
                j.open_obj("dimension");
                j.open_arr("grid");
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    j.open_item_obj();
                    j.kv_uint("v", grid[i]);
                    j.kv_num("residual", res[i]);
                    j.close_obj();
                }
                j.close_arr();
                j.kv_num("drift", drift);
                j.close_obj();
                j.open_obj("floor_power");
                j.kv_num("c", c_chk);
                j.kv_uint("checked_n", n_cap);
                j.kv_int("mismatches", mismatches);
                j.kv_int("pi_c_1e6", pc);
                j.kv_num("li_1e6", liv);
                j.kv_num("count_ratio", ratio);
                j.close_obj();
                j.close_obj();
            } else {
                art.csv += "key,value\n";
                art.csv += "mertens_x," + std::to_string(verify_x) + "\n";
                art.csv += "product_ratio," + num(m.product_ratio) + "\n";
                art.csv += "sum_residual," + num(m.sum_residual) + "\n";
                for (std::size_t i = 0; i < grid.size(); ++i)
                    art.csv += "dimension_residual_" + std::to_string(grid[i]) + "," +
                               num(res[i]) + "\n";
                art.csv += "dimension_drift," + num(drift) + "\n";
                art.csv += "floor_power_mismatches," + std::to_string(mismatches) + "\n";
                art.csv += "pi_c_1e6," + std::to_string(pc) + "\n";
                art.csv += "li_1e6," + num(liv) + "\n";
                art.csv += "count_ratio," + num(ratio) + "\n";
            }
        };
        specs.push_back(std::move(spec));
    }

    // ---- windows ----
    {
        SubSpec spec;
        spec.sub = app.add_subcommand("windows",
                                      "majorant/minorant pairs and smooth periodic windows");
        spec.default_format = "csv";
        auto* o_kind = spec.sub->add_option("--kind", kind, "construction")
                           ->check(CLI::IsMember({"selberg", "smooth"}));
        auto* o_d0 = spec.sub->add_option("--delta0", delta0, "half-width (selberg)");
        auto* o_N = spec.sub->add_option("--N", N, "degree (selberg)");
        auto* o_al = spec.sub->add_option("--alpha", alpha, "left endpoint (smooth)");
        auto* o_be = spec.sub->add_option("--beta", beta, "right endpoint (smooth)");
        auto* o_de = spec.sub->add_option("--delta", width, "taper width (smooth)");
        auto* o_or = spec.sub->add_option("--order", order, "convolution order (smooth)");
        auto* o_gr = spec.sub->add_option("--grid", grid_n, "also emit N evaluation points");
        spec.bindings.push_back(bind(o_kind, "kind", kind));
        spec.bindings.push_back(bind(o_d0, "delta0", delta0));
        spec.bindings.push_back(bind(o_N, "N", N));
        spec.bindings.push_back(bind(o_al, "alpha", alpha));
        spec.bindings.push_back(bind(o_be, "beta", beta));
        spec.bindings.push_back(bind(o_de, "delta", width));
        spec.bindings.push_back(bind(o_or, "order", order));
        spec.bindings.push_back(bind(o_gr, "grid", grid_n));
        add_common(spec.sub, spec.bindings);
        spec.run = [&](Artifact& art, std::vector<Binding>& bindings) {
            write_preamble(art, "windows", bindings, default_constants());
            if (kind == "selberg") {
                const SelbergPair sp = selberg_pair(delta0, N);
                if (art.is_json) {
                    auto& j = art.j;
                    j.open_obj("result");
                    j.kv_num("delta0", sp.delta0);
                    j.kv_int("N", sp.N);
                    j.kv_num("minorant_constant", sp.minorant.constant_term);
                    j.kv_num("majorant_constant", sp.majorant.constant_term);
                    j.kv_num("max_coefficient", sp.max_coefficient);
                    j.kv_num("coefficient_ratio", sp.coefficient_ratio);
                    j.open_arr("coefficients");
                    for (long long n = 1; n <= sp.N; ++n) {
                        j.open_item_obj();
                        j.kv_int("n", n);
                        j.kv_num("minorant", sp.minorant.coefficients.at(n).real());
                        j.kv_num("majorant", sp.majorant.coefficients.at(n).real());
                        j.close_obj();
                    }
                    j.close_arr();
                    if (grid_n > 0) {
                        j.open_arr("grid");
                        for (long long i = 0; i < grid_n; ++i) {
                            const double x = (i + 0.5) / double(grid_n) - 0.5;
                            j.open_item_obj();
                            j.kv_num("x", x);
                            j.kv_num("indicator", std::fabs(x) < delta0 ? 1.0 : 0.0);
                            j.kv_num("minorant", sp.minorant.eval(x));
                            j.kv_num("majorant", sp.majorant.eval(x));
                            j.close_obj();
                        }
                        j.close_arr();
                    }
                    j.close_obj();
                } else {
                    art.csv += "# minorant_constant=" + num(sp.minorant.constant_term) +
                               " majorant_constant=" + num(sp.majorant.constant_term) +
                               " max_coefficient=" + num(sp.max_coefficient) + "\n";
                    art.csv += "n,minorant_coeff,majorant_coeff\n";
                    art.csv += "0," + num(sp.minorant.constant_term) + "," +
                               num(sp.majorant.constant_term) + "\n";
                    for (long long n = 1; n <= sp.N; ++n)
                        art.csv += std::to_string(n) + "," +
                                   num(sp.minorant.coefficients.at(n).real()) + "," +
                                   num(sp.majorant.coefficients.at(n).real()) + "\n";
                    if (grid_n > 0) {
                        art.csv += "# grid\nx,indicator,minorant,majorant\n";
                        for (long long i = 0; i < grid_n; ++i) {
                            const double x = (i + 0.5) / double(grid_n) - 0.5;
                            art.csv += num(x) + "," +
                                       (std::fabs(x) < delta0 ? "1" : "0") + "," +
                                       num(sp.minorant.eval(x)) + "," +
                                       num(sp.majorant.eval(x)) + "\n";
                        }
                    }
                }
            } else {
                const SmoothWindow win = smooth_window(alpha, beta, width, (int)order);
                if (art.is_json) {
                    auto& j = art.j;
                    j.open_obj("result");
                    j.kv_num("alpha", win.alpha);
                    j.kv_num("beta", win.beta);
                    j.kv_num("delta", win.delta);
                    j.kv_int("order", win.order);
                    j.kv_num("mean", win.mean);
                    j.kv_int("H", win.H);
                    j.kv_num("epsilon", win.epsilon);
                    j.kv_num("tail_bound", win.tail_bound);
                    j.kv_num("tail_constant", win.tail_constant);
                    j.open_arr("coefficients");
                    for (long long h = 1; h <= win.H; ++h) {
                        const auto cc = win.poly.coefficients.at(h);
                        j.open_item_obj();
                        j.kv_int("h", h);
                        j.kv_num("re", cc.real());
                        j.kv_num("im", cc.imag());
                        j.kv_num("abs", std::abs(cc));
                        j.close_obj();
                    }
                    j.close_arr();
                    if (grid_n > 0) {
                        j.open_arr("grid");
                        for (long long i = 0; i < grid_n; ++i) {
                            const double x = (i + 0.5) / double(grid_n);
                            j.open_item_obj();
                            j.kv_num("x", x);
                            j.kv_num("exact", win.exact(x));
                            j.kv_num("series", win.poly.eval(x));
                            j.close_obj();
                        }
                        j.close_arr();
                    }
                    j.close_obj();
                } else {
                    art.csv += "# mean=" + num(win.mean) + " H=" + std::to_string(win.H) +
                               " tail_bound=" + num(win.tail_bound) +
                               " tail_constant=" + num(win.tail_constant) + "\n";
                    art.csv += "h,re,im,abs\n";
                    art.csv += "0," + num(win.poly.constant_term) + ",0," +
                               num(win.poly.constant_term) + "\n";
                    for (long long h = 1; h <= win.H; ++h) {
                        const auto cc = win.poly.coefficients.at(h);
                        art.csv += std::to_string(h) + "," + num(cc.real()) + "," +
                                   num(cc.imag()) + "," + num(std::abs(cc)) + "\n";
                    }
                    if (grid_n > 0) {
                        art.csv += "# grid\nx,exact,series\n";
                        for (long long i = 0; i < grid_n; ++i) {
                            const double x = (i + 0.5) / double(grid_n);
                            art.csv += num(x) + "," + num(win.exact(x)) + "," +
                                       num(win.poly.eval(x)) + "\n";
                        }
                    }
                }
            }
        };
        specs.push_back(std::move(spec));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 64;
    }

    try {
        for (auto& spec : specs) {
            if (!spec.sub->parsed()) continue;
            merge_config(spec.bindings, config_path);
            Artifact art;
            art.is_json = (format.empty() ? spec.default_format : format) == "json";
            spec.run(art, spec.bindings);
            emit(art, out_path);
            return 0;
        }
        std::cerr << "no subcommand selected\n";
        return 64;
    } catch (const usage_failure& u) {
        std::cerr << "usage error: " << u.msg << "\n";
        return 64;
    } catch (const sievelab::budget_error& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return 2;
    } catch (const sievelab::capacity_error& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return 2;
    } catch (const sievelab::precision_error& e) {
        std::cerr << "precision error: " << e.what() << "\n";
        return 2;
    } catch (const sievelab::config_error& e) {
        std::cerr << "config error: " << e.what();
        for (const auto& key : e.offending_keys) std::cerr << " " << key;
        std::cerr << "\n";
        return 1;
    } catch (const nlohmann::json::parse_error& e) {
        std::cerr << "config parse error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
