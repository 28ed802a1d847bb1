#include "tailkit/config.hpp"

#include "tailkit/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace tailkit {

using nlohmann::json;

std::string to_string(Formula f) {
    switch (f) {
        case Formula::thm1: return "thm1";
        case Formula::thm2: return "thm2";
        case Formula::eqNN: return "eqNN";
        case Formula::lemma1: return "lemma1";
        case Formula::ff: return "ff";
    }
    return "unknown";
}

std::optional<Formula> parse_formula(const std::string& s) {
    for (Formula f : {Formula::thm1, Formula::thm2, Formula::eqNN, Formula::lemma1, Formula::ff})
        if (s == to_string(f)) return f;
    return std::nullopt;
}

std::optional<Method> parse_method(const std::string& s) {
    for (Method m : {Method::crude, Method::conditional_ak, Method::quadrature})
        if (s == to_string(m)) return m;
    return std::nullopt;
}

double ThresholdGrid::u_at(std::size_t k) const {
    return u_given.empty() ? std::exp(log_u[k]) : u_given[k];
}

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
}

const json& require_object(const json& j, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object");
    return j;
}

void reject_unknown(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return it.key() == k; });
        if (!known) fail(where, "unknown key \"" + it.key() + "\"");
    }
}

double get_number(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) fail(where, "missing \"" + key + "\"");
    const json& v = j.at(key);
    if (!v.is_number()) fail(where + "." + key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(where + "." + key, "must be finite");
    return x;
}

double get_number_or(const json& j, const std::string& key, const std::string& where, double fallback) {
    return j.contains(key) ? get_number(j, key, where) : fallback;
}

std::uint64_t get_count(const json& v, const std::string& where) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) fail(where, "expected a nonnegative integer");
    return v.get<std::uint64_t>();
}

std::string get_string(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) fail(where, "missing \"" + key + "\"");
    if (!j.at(key).is_string()) fail(where + "." + key, "expected a string");
    return j.at(key).get<std::string>();
}

std::vector<double> get_number_list(const json& v, const std::string& where) {
    if (!v.is_array()) fail(where, "expected an array of numbers");
    std::vector<double> out;
    for (const json& x : v) {
        if (!x.is_number()) fail(where, "expected an array of numbers");
        out.push_back(x.get<double>());
        if (!std::isfinite(out.back())) fail(where, "entries must be finite");
    }
    return out;
}

template <class F>
void guarded(const std::string& where, F&& f) {
    try {
        f();
    } catch (const DomainError& e) {
        fail(where, e.what());
    }
}

RegVaryingSpec parse_regvary(const json& j, const std::string& where) {
    require_object(j, where);
    reject_unknown(j, where, {"scale", "index", "log_exponent"});
    RegVaryingSpec L;
    L.scale = get_number_or(j, "scale", where, 1.0);
    L.index = get_number_or(j, "index", where, 0.0);
    L.log_exponent = get_number_or(j, "log_exponent", where, 0.0);
    guarded(where, [&] { L.validate(); });
    return L;
}

TailRatios parse_ratios(const json& j, const std::string& where) {
    if (j.is_number()) return TailRatios::constant(j.get<double>());
    require_object(j, where);
    reject_unknown(j, where, {"head", "rest"});
    TailRatios c;
    if (j.contains("head")) c.head = get_number_list(j.at("head"), where + ".head");
    c.rest = get_number_or(j, "rest", where, 1.0);
    return c;
}

FactorModelSpec parse_factor(const json& j) {
    const std::string where = "model";
    reject_unknown(j, where, {"type", "rho", "base_tail", "c", "idiosyncratic"});
    FactorModelSpec m;
    m.rho = get_number(j, "rho", where);
    if (j.contains("base_tail")) m.base_tail = parse_regvary(j.at("base_tail"), where + ".base_tail");
    if (j.contains("c")) m.c = parse_ratios(j.at("c"), where + ".c");
    const std::string kind = j.contains("idiosyncratic")
                                 ? get_string(j, "idiosyncratic", where)
                                 : (m.base_tail.is_identity() ? "standard-normal" : "l-perturbed");
    if (kind == "standard-normal") {
        m.idiosyncratic = Idiosyncratic::standard_normal;
    } else if (kind == "l-perturbed") {
        m.idiosyncratic = Idiosyncratic::perturbed;
    } else {
        fail(where + ".idiosyncratic", "expected \"standard-normal\" or \"l-perturbed\", got \"" + kind + "\"");
    }
    guarded(where, [&] { m.validate(); });
    return m;
}

GaussianModel parse_gaussian(const json& j) {
    const std::string where = "model";
    reject_unknown(j, where, {"type", "correlation", "r", "rows"});
    const std::string kind = get_string(j, "correlation", where);
    GaussianModel g;
    if (kind == "independent") {
        g = GaussianModel::independent();
    } else if (kind == "equicorrelated") {
        g = GaussianModel::equicorrelated(get_number(j, "r", where));
    } else if (kind == "matrix") {
        if (!j.contains("rows") || !j.at("rows").is_array()) fail(where, "correlation \"matrix\" needs \"rows\"");
        std::vector<std::vector<double>> rows;
        for (const json& r : j.at("rows")) rows.push_back(get_number_list(r, where + ".rows"));
        g = GaussianModel::from_rows(std::move(rows));
    } else {
        fail(where + ".correlation", "expected independent, equicorrelated or matrix, got \"" + kind + "\"");
    }
    guarded(where, [&] { g.validate(); });
    return g;
}

ProductModel parse_product(const json& j) {
    const std::string where = "model";
    reject_unknown(j, where, {"type", "sigma1", "sigma2", "L1", "L2"});
    ProductModel p;
    p.params.sigma1 = get_number_or(j, "sigma1", where, 1.0);
    p.params.sigma2 = get_number_or(j, "sigma2", where, 1.0);
    if (j.contains("L1")) p.params.L1 = parse_regvary(j.at("L1"), where + ".L1");
    if (j.contains("L2")) p.params.L2 = parse_regvary(j.at("L2"), where + ".L2");
    guarded(where, [&] { p.params.validate(); });
    return p;
}

ModelConfig parse_model(const json& j) {
    require_object(j, "model");
    const std::string type = get_string(j, "type", "model");
    if (type == "factor") return parse_factor(j);
    if (type == "gaussian") return parse_gaussian(j);
    if (type == "product") return parse_product(j);
    fail("model.type", "expected factor, gaussian or product, got \"" + type + "\"");
}

ClaimCountSpec parse_claim_count(const json& j) {
    const std::string where = "claim_count";
    require_object(j, where);
    reject_unknown(j, where, {"law", "n", "p", "lambda", "probs", "delta"});
    const std::string law = get_string(j, "law", where);
    const double delta = get_number_or(j, "delta", where, 1.0);
    ClaimCountSpec s;
    if (law == "fixed") {
        if (!j.contains("n")) fail(where, "fixed law needs \"n\"");
        s = ClaimCountSpec::fixed(get_count(j.at("n"), where + ".n"), delta);
    } else if (law == "geometric") {
        s = ClaimCountSpec::geometric(get_number(j, "p", where), delta);
    } else if (law == "poisson") {
        s = ClaimCountSpec::poisson(get_number(j, "lambda", where), delta);
    } else if (law == "truncated") {
        if (!j.contains("probs")) fail(where, "truncated law needs \"probs\"");
        s = ClaimCountSpec::truncated(get_number_list(j.at("probs"), where + ".probs"), delta);
    } else {
        fail(where + ".law", "expected fixed, geometric, poisson or truncated, got \"" + law + "\"");
    }
    guarded(where, [&] { s.validate(); });
    return s;
}

ThresholdGrid parse_grid(const json& j) {
    const std::string where = "grid";
    require_object(j, where);
    reject_unknown(j, where, {"u", "log_u", "from_log_u", "to_log_u", "count"});
    const int forms = int(j.contains("u")) + int(j.contains("log_u")) + int(j.contains("from_log_u"));
    if (forms != 1) fail(where, "give exactly one of \"u\", \"log_u\" or {from_log_u, to_log_u, count}");
    ThresholdGrid g;
    if (j.contains("u")) {
        g.u_given = get_number_list(j.at("u"), where + ".u");
        for (double u : g.u_given) {
            if (!(u > 0.0)) fail(where + ".u", "thresholds must be > 0");
            g.log_u.push_back(std::log(u));
        }
    } else if (j.contains("log_u")) {
        g.log_u = get_number_list(j.at("log_u"), where + ".log_u");
    } else {
        const double from = get_number(j, "from_log_u", where);
        const double to = get_number(j, "to_log_u", where);
        if (!j.contains("count")) fail(where, "missing \"count\"");
        const std::uint64_t count = get_count(j.at("count"), where + ".count");
        if (count == 1 && from != to) fail(where, "count 1 needs from_log_u == to_log_u");
        for (std::uint64_t k = 0; k < count; ++k)
            g.log_u.push_back(count == 1 ? from : from + (to - from) * double(k) / double(count - 1));
    }
    for (std::size_t k = 1; k < g.log_u.size(); ++k)
        if (!(g.log_u[k] > g.log_u[k - 1])) fail(where, "thresholds must be strictly increasing");
    return g;
}

RhoSequence parse_rho_seq(const json& j, const std::string& where) {
    require_object(j, where);
    reject_unknown(j, where, {"rule", "value", "c", "values"});
    const std::string rule = get_string(j, "rule", where);
    if (rule == "constant") return RhoSequence::constant(get_number(j, "value", where));
    if (rule == "log_sqrt") return RhoSequence::log_sqrt(get_number(j, "c", where));
    if (rule == "table") {
        if (!j.contains("values")) fail(where, "table rule needs \"values\"");
        auto values = get_number_list(j.at("values"), where + ".values");
        if (values.empty()) fail(where + ".values", "must not be empty");
        return RhoSequence::from_table(std::move(values));
    }
    fail(where + ".rule", "expected constant, log_sqrt or table, got \"" + rule + "\"");
}

ValidateConfig parse_validate(const json& j) {
    const std::string where = "validate";
    require_object(j, where);
    reject_unknown(j, where, {"rho_seq", "u", "log_u", "c_star", "eta", "delta", "rho_n", "rho", "n"});
    ValidateConfig v;
    if (j.contains("rho_seq")) v.rho_seq = parse_rho_seq(j.at("rho_seq"), where + ".rho_seq");
    if (j.contains("u") && j.contains("log_u")) fail(where, "give \"u\" or \"log_u\", not both");
    if (j.contains("u")) {
        const double u = get_number(j, "u", where);
        if (!(u > 0.0)) fail(where + ".u", "must be > 0");
        v.log_u = std::log(u);
    }
    if (j.contains("log_u")) v.log_u = get_number(j, "log_u", where);
    v.cnu.c_star = get_number_or(j, "c_star", where, v.cnu.c_star);
    v.cnu.eta = get_number_or(j, "eta", where, v.cnu.eta);
    if (j.contains("delta")) {
        v.cnu.delta = get_number(j, "delta", where);
        v.cnu_delta_given = true;
    }
    if (j.contains("rho_n")) v.rho_n = get_number(j, "rho_n", where);
    if (j.contains("rho")) v.rho = get_number(j, "rho", where);
    if (j.contains("n")) v.n = get_count(j.at("n"), where + ".n");
    return v;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    require_object(j, "config");
    reject_unknown(j, "config", {"model", "claim_count", "grid", "statistic", "estimators", "formulas", "n_samples",
                                 "seed", "workers", "output", "compare", "validate"});
    ExperimentConfig cfg;
    if (!j.contains("model")) fail("config", "missing \"model\"");
    cfg.model = parse_model(j.at("model"));
    if (j.contains("claim_count")) cfg.claim_count = parse_claim_count(j.at("claim_count"));
    if (j.contains("grid")) cfg.grid = parse_grid(j.at("grid"));

    if (j.contains("statistic")) {
        const std::string s = get_string(j, "statistic", "config");
        if (s == "sum") cfg.statistic = StatisticChoice::sum;
        else if (s == "max") cfg.statistic = StatisticChoice::max;
        else if (s == "both") cfg.statistic = StatisticChoice::both;
        else fail("statistic", "expected sum, max or both, got \"" + s + "\"");
    }
    if (j.contains("estimators")) {
        const json& e = j.at("estimators");
        if (!e.is_array()) fail("estimators", "expected an array of names");
        for (const json& x : e) {
            const auto m = x.is_string() ? parse_method(x.get<std::string>()) : std::nullopt;
            if (!m) fail("estimators", "expected crude, conditional-ak or quadrature, got " + x.dump());
            if (std::find(cfg.estimators.begin(), cfg.estimators.end(), *m) == cfg.estimators.end())
                cfg.estimators.push_back(*m);
        }
    }
    if (j.contains("formulas")) {
        const json& f = j.at("formulas");
        if (!f.is_array()) fail("formulas", "expected an array of names");
        for (const json& x : f) {
            const auto v = x.is_string() ? parse_formula(x.get<std::string>()) : std::nullopt;
            if (!v) fail("formulas", "expected thm1, thm2, eqNN, lemma1 or ff, got " + x.dump());
            if (std::find(cfg.formulas.begin(), cfg.formulas.end(), *v) == cfg.formulas.end())
                cfg.formulas.push_back(*v);
        }
    }
    if (j.contains("n_samples")) {
        cfg.n_samples = get_count(j.at("n_samples"), "n_samples");
        if (cfg.n_samples < 1) fail("n_samples", "must be >= 1");
    }
    if (j.contains("seed")) cfg.seed = get_count(j.at("seed"), "seed");
    if (j.contains("workers")) {
        const std::uint64_t w = get_count(j.at("workers"), "workers");
        if (w < 1 || w > 1024) fail("workers", "must lie in [1, 1024]");
        cfg.workers = static_cast<unsigned>(w);
    }
    if (j.contains("output")) cfg.output = get_string(j, "output", "config");
    if (j.contains("compare")) {
        const json& c = require_object(j.at("compare"), "compare");
        reject_unknown(c, "compare", {"formula", "tolerance"});
        if (c.contains("formula")) {
            cfg.compare.formula = parse_formula(get_string(c, "formula", "compare"));
            if (!cfg.compare.formula) fail("compare.formula", "unknown formula");
        }
        cfg.compare.tolerance = get_number_or(c, "tolerance", "compare", cfg.compare.tolerance);
        if (!(cfg.compare.tolerance >= 0.0)) fail("compare.tolerance", "must be >= 0");
    }
    if (j.contains("validate")) cfg.validate = parse_validate(j.at("validate"));
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config(os.str());
}

}  // namespace tailkit
