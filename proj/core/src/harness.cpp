#include "tailkit/harness.hpp"

#include "tailkit/errors.hpp"
#include "tailkit/normal.hpp"
#include "tailkit/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>

namespace tailkit {

namespace {

struct StatChoice {
    std::string label;  // sum | max | product
    Statistic stat = Statistic::sum;
};

bool is_factor(const ExperimentConfig& c) { return std::holds_alternative<FactorModelSpec>(c.model); }
bool is_gaussian(const ExperimentConfig& c) { return std::holds_alternative<GaussianModel>(c.model); }
bool is_product(const ExperimentConfig& c) { return std::holds_alternative<ProductModel>(c.model); }

std::string model_name(const ExperimentConfig& c) {
    return is_factor(c) ? "factor" : is_gaussian(c) ? "gaussian" : "product";
}

// Claims are jointly Gaussian log-normals with LN(0,1) marginals.
bool standard_gaussian_claims(const ExperimentConfig& c) {
    if (is_gaussian(c)) return true;
    if (!is_factor(c)) return false;
    const auto& m = std::get<FactorModelSpec>(c.model);
    return m.base_tail.is_identity() && m.c.is_constant() && m.c.rest == 1.0;
}

std::optional<std::uint64_t> fixed_n(const ExperimentConfig& c) {
    if (!c.claim_count) return std::nullopt;
    if (const auto* f = std::get_if<FixedCount>(&c.claim_count->law)) return f->n;
    return std::nullopt;
}

bool formula_applies(const ExperimentConfig& c, Formula f) {
    switch (f) {
        case Formula::thm1: return is_factor(c);
        case Formula::ff: return is_factor(c);
        case Formula::thm2: return standard_gaussian_claims(c);
        case Formula::eqNN: return standard_gaussian_claims(c) && fixed_n(c).has_value();
        case Formula::lemma1: return is_product(c);
    }
    return false;
}

bool formula_needs_count(Formula f) { return f == Formula::thm1 || f == Formula::thm2; }

std::vector<Formula> active_formulas(const ExperimentConfig& c) {
    std::vector<Formula> out;
    if (c.formulas.empty()) {
        for (Formula f : {Formula::thm1, Formula::thm2, Formula::eqNN, Formula::ff, Formula::lemma1})
            if (formula_applies(c, f) && (!formula_needs_count(f) || c.claim_count)) out.push_back(f);
        return out;
    }
    for (Formula f : c.formulas) {
        if (!formula_applies(c, f))
            throw ConfigError("formulas: " + to_string(f) + " does not apply to the " + model_name(c) + " model");
        out.push_back(f);
    }
    return out;
}

void require_count_condition(const ExperimentConfig& c, const std::vector<Formula>& formulas) {
    const bool needs = std::any_of(formulas.begin(), formulas.end(), formula_needs_count);
    if (!needs) return;
    if (!c.claim_count) throw ConfigError("claim_count: required by thm1/thm2");
    require_moment_condition(*c.claim_count);
}

Probability evaluate_formula(const ExperimentConfig& c, Formula f, double log_u) {
    switch (f) {
        case Formula::thm1:
            return random_sum_tail_asym_thm1_at_log(std::get<FactorModelSpec>(c.model), *c.claim_count, log_u);
        case Formula::thm2: return random_sum_tail_asym_thm2_at_log(mean_n(*c.claim_count), log_u);
        case Formula::eqNN: return finite_sum_tail_asym_at_log(*fixed_n(c), log_u);
        case Formula::ff: return marginal_tail_asym_at_log(std::get<FactorModelSpec>(c.model), 1, log_u);
        case Formula::lemma1: return product_tail_asym_at_log(std::get<ProductModel>(c.model).params, log_u);
    }
    throw DomainError("unknown formula");
}

std::vector<StatChoice> statistics(const ExperimentConfig& c) {
    if (is_product(c)) return {{"product", Statistic::sum}};
    switch (c.statistic) {
        case StatisticChoice::sum: return {{"sum", Statistic::sum}};
        case StatisticChoice::max: return {{"max", Statistic::max}};
        case StatisticChoice::both: return {{"sum", Statistic::sum}, {"max", Statistic::max}};
    }
    return {};
}

const ClaimCountSpec& count_for_estimators(const ExperimentConfig& c) {
    if (!c.claim_count) throw ConfigError("claim_count: required by the estimators of the " + model_name(c) + " model");
    return *c.claim_count;
}

ClaimModel claim_model(const ExperimentConfig& c) {
    if (const auto* f = std::get_if<FactorModelSpec>(&c.model)) return *f;
    return std::get<GaussianModel>(c.model);
}

// Loading of the equivalent standard factor model, when the claims are one.
std::optional<double> standard_factor_loading(const ExperimentConfig& c) {
    if (!standard_gaussian_claims(c)) return std::nullopt;
    if (const auto* f = std::get_if<FactorModelSpec>(&c.model)) return f->rho;
    const auto fm = std::get<GaussianModel>(c.model).as_factor_model();
    if (!fm) return std::nullopt;
    return fm->rho;
}

Estimate quadrature_oracle(const ExperimentConfig& c, const StatChoice& s, double log_u) {
    if (const auto* p = std::get_if<ProductModel>(&c.model)) return product_tail_quadrature_at_log(p->params, log_u);
    const auto n = fixed_n(c);
    const auto rho = standard_factor_loading(c);
    if (!n || !rho)
        throw DomainError("no quadrature oracle: needs fixed N and exchangeable LN(0,1) claims");
    if (*n == 0) {
        Estimate e;
        e.method = Method::quadrature;
        e.value = 0.0;
        return e;
    }
    if (s.stat == Statistic::max || *n == 1) return max_tail_quadrature_at_log(*n, *rho, log_u);
    if (*n == 2 && *rho == 0.0) return exact_sum2_quadrature_at_log(log_u);
    throw DomainError("no quadrature oracle for the sum: needs N fixed at 2 and independent claims");
}

Estimate conditional_estimate(const ExperimentConfig& c, const StatChoice& s, double u, const McOptions& opts) {
    if (const auto* f = std::get_if<FactorModelSpec>(&c.model))
        return ak_conditional_tail(*f, count_for_estimators(c), u, opts, s.stat);
    if (const auto* g = std::get_if<GaussianModel>(&c.model)) {
        const auto fm = g->as_factor_model();
        if (!fm) throw DomainError("conditional-ak needs an exchangeable correlation (independent or equicorrelated r >= 0)");
        return ak_conditional_tail(*fm, count_for_estimators(c), u, opts, s.stat);
    }
    throw DomainError("conditional-ak is not available for the product model");
}

// Estimates for one grid point. Crude sum and max share paths.
class PointEstimator {
public:
    PointEstimator(const ExperimentConfig& c, double u, double log_u, const McOptions& opts)
        : c_(c), u_(u), log_u_(log_u), opts_(opts) {}

    Estimate run(Method m, const StatChoice& s) {
        switch (m) {
            case Method::crude: return crude(s);
            case Method::conditional_ak: return conditional_estimate(c_, s, u_, opts_);
            case Method::quadrature: return quadrature_oracle(c_, s, log_u_);
        }
        throw DomainError("unknown method");
    }

private:
    Estimate crude(const StatChoice& s) {
        if (const auto* p = std::get_if<ProductModel>(&c_.model)) return crude_product_tail(p->params, u_, opts_);
        if (!crude_) crude_ = crude_mc_tail_both(claim_model(c_), count_for_estimators(c_), u_, opts_);
        return s.stat == Statistic::sum ? crude_->sum : crude_->max;
    }

    const ExperimentConfig& c_;
    double u_;
    double log_u_;
    McOptions opts_;
    std::optional<CrudePair> crude_;
};

std::string sanitize(std::string s) {
    for (char& ch : s)
        if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
    return s;
}

// Ratio in logs, so asymptotic values below the double range still compare.
std::optional<double> ratio_of(const Estimate& e, const Probability& a) {
    if (a.log_value == -INFINITY) return std::nullopt;
    if (!(e.value > 0.0) && e.log_value == -INFINITY) return 0.0;
    const double log_e = std::isfinite(e.log_value) ? e.log_value : std::log(e.value);
    return std::exp(log_e - a.log_value);
}

McOptions mc_options(const ExperimentConfig& c, const RunOverrides& o) {
    return McOptions{c.n_samples, o.seed.value_or(c.seed), resolve_workers(c, o)};
}

std::string render(const std::vector<ReportRow>& rows, const std::vector<std::string>& comments) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const ReportRow& r : rows) out += format_row(r) + '\n';
    for (const std::string& c : comments) out += "# " + c + '\n';
    return out;
}

int rows_exit_code(const std::vector<ReportRow>& rows) {
    if (rows.empty()) return kExitOk;
    return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.failed(); }) ? kExitAllFailed
                                                                                                   : kExitOk;
}

std::vector<Method> require_estimators(const ExperimentConfig& c, const char* command) {
    if (c.estimators.empty())
        throw ConfigError(std::string(command) + " needs at least one entry in \"estimators\" (crude, conditional-ak, quadrature)");
    return c.estimators;
}

ReportRow base_row(const ExperimentConfig& c, std::size_t k) {
    ReportRow r;
    r.u = c.grid.u_at(k);
    r.log_u = c.grid.log_u[k];
    return r;
}

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

// Report text; CSV columns use the round-trip format_number.
std::string short_number(double x) { return std::isfinite(x) ? fmt("%.10g", x) : format_number(x); }

}  // namespace

unsigned resolve_workers(const ExperimentConfig& cfg, const RunOverrides& o) {
    if (o.workers) return std::max(1u, *o.workers);
    if (const char* env = std::getenv("TAILKIT_WORKERS")) {
        char* end = nullptr;
        const unsigned long w = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && w >= 1 && w <= 1024) return static_cast<unsigned>(w);
        throw ConfigError(std::string("TAILKIT_WORKERS must be an integer in [1, 1024], got \"") + env + "\"");
    }
    return cfg.workers.value_or(1u);
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_row(const ReportRow& r) {
    auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
    std::string s;
    s += format_number(r.u) + ',';
    s += format_number(r.log_u) + ',';
    s += r.formula + ',';
    s += opt(r.asym_value) + ',';
    s += r.method + ',';
    if (r.estimate) {
        const Estimate& e = *r.estimate;
        s += format_number(e.value) + ',';
        s += format_number(e.std_error) + ',';
        s += opt(r.ratio) + ',';
        s += std::to_string(e.n_samples) + ',';
        s += (e.method == Method::quadrature ? std::string() : std::to_string(e.seed)) + ',';
    } else {
        s += ",,,,,";
    }
    s += sanitize(r.error);
    return s;
}

CommandResult cmd_asym(const ExperimentConfig& cfg, const RunOverrides&) {
    const auto formulas = active_formulas(cfg);
    require_count_condition(cfg, formulas);
    CommandResult res;
    for (std::size_t k = 0; k < cfg.grid.size(); ++k)
        for (Formula f : formulas) {
            ReportRow r = base_row(cfg, k);
            r.formula = to_string(f);
            try {
                const Probability p = evaluate_formula(cfg, f, r.log_u);
                r.asym_value = p.value;
                r.asym_log_value = p.log_value;
            } catch (const std::exception& e) {
                r.error = e.what();
            }
            res.rows.push_back(std::move(r));
        }
    std::vector<std::string> comments{std::string("lemma1 prefactor convention: ") + product_tail_convention()};
    if (cfg.claim_count && !is_product(cfg)) {
        const MomentCheck mc = check_moment_condition(*cfg.claim_count);
        comments.push_back("claim count " + cfg.claim_count->family_name() + ": E[N] = " + short_number(mean_n(*cfg.claim_count)) +
                           ", E[(1+delta)^N] = " + (mc.finite ? short_number(mc.value) : std::string("inf")));
    }
    res.output = render(res.rows, comments);
    res.exit_code = rows_exit_code(res.rows);
    return res;
}

CommandResult cmd_simulate(const ExperimentConfig& cfg, const RunOverrides& o) {
    const auto methods = require_estimators(cfg, "simulate");
    const McOptions opts = mc_options(cfg, o);
    CommandResult res;
    for (std::size_t k = 0; k < cfg.grid.size(); ++k) {
        const ReportRow proto = base_row(cfg, k);
        PointEstimator pe(cfg, proto.u, proto.log_u, opts);
        for (const StatChoice& s : statistics(cfg))
            for (Method m : methods) {
                ReportRow r = proto;
                r.method = to_string(m) + ":" + s.label;
                try {
                    r.estimate = pe.run(m, s);
                } catch (const ConfigError&) {
                    throw;
                } catch (const std::exception& e) {
                    r.error = e.what();
                }
                res.rows.push_back(std::move(r));
            }
    }
    res.output = render(res.rows, {"workers: " + std::to_string(opts.workers) + ", seed: " + std::to_string(opts.seed)});
    res.exit_code = rows_exit_code(res.rows);
    return res;
}

TrendSummary summarize_trend(const std::string& series, const std::vector<ReportRow>& rows, double tolerance) {
    TrendSummary t;
    t.series = series;
    bool complete = !rows.empty();
    std::vector<double> dev;
    for (const ReportRow& r : rows) {
        if (r.failed() || !r.ratio) {
            complete = false;
            continue;
        }
        t.ratios.push_back(*r.ratio);
        dev.push_back(std::abs(*r.ratio - 1.0));
    }
    t.nonincreasing = complete;
    t.strictly_decreasing = complete;
    for (std::size_t k = 1; k < dev.size(); ++k) {
        t.nonincreasing = t.nonincreasing && dev[k] <= dev[k - 1];
        t.strictly_decreasing = t.strictly_decreasing && dev[k] < dev[k - 1];
    }
    if (!complete) return t;
    const ReportRow& last = rows.back();
    t.final_deviation = dev.back();
    const Estimate& e = *last.estimate;
    // std_error / asym_value = ratio * std_error / estimate
    const double se_rel = e.value > 0.0 ? *last.ratio * e.std_error / e.value : 0.0;
    t.final_allowance = std::max(tolerance, 3.0 * se_rel);
    t.pass = t.nonincreasing && t.final_deviation <= t.final_allowance;
    return t;
}

CommandResult cmd_compare(const ExperimentConfig& cfg, const RunOverrides& o) {
    const auto methods = require_estimators(cfg, "compare");
    const auto formulas = active_formulas(cfg);
    Formula formula;
    if (cfg.compare.formula) {
        formula = *cfg.compare.formula;
        if (!formula_applies(cfg, formula))
            throw ConfigError("compare.formula: " + to_string(formula) + " does not apply to the " + model_name(cfg) + " model");
    } else if (!formulas.empty()) {
        formula = formulas.front();
    } else {
        throw ConfigError("compare needs an asymptotic formula that applies to the " + model_name(cfg) + " model");
    }
    require_count_condition(cfg, {formula});

    const McOptions opts = mc_options(cfg, o);
    CommandResult res;
    std::map<std::string, std::vector<ReportRow>> series;
    std::vector<std::string> order;
    for (std::size_t k = 0; k < cfg.grid.size(); ++k) {
        ReportRow proto = base_row(cfg, k);
        proto.formula = to_string(formula);
        std::optional<Probability> asym;
        std::string asym_error;
        try {
            asym = evaluate_formula(cfg, formula, proto.log_u);
            proto.asym_value = asym->value;
            proto.asym_log_value = asym->log_value;
        } catch (const std::exception& e) {
            asym_error = e.what();
        }
        PointEstimator pe(cfg, proto.u, proto.log_u, opts);
        for (const StatChoice& s : statistics(cfg))
            for (Method m : methods) {
                ReportRow r = proto;
                r.method = to_string(m) + ":" + s.label;
                try {
                    r.estimate = pe.run(m, s);
                    if (asym) r.ratio = ratio_of(*r.estimate, *asym);
                    else r.error = asym_error;
                } catch (const ConfigError&) {
                    throw;
                } catch (const std::exception& e) {
                    r.error = e.what();
                }
                if (!series.count(r.method)) order.push_back(r.method);
                series[r.method].push_back(r);
                res.rows.push_back(std::move(r));
            }
    }

    std::vector<std::string> comments{"workers: " + std::to_string(opts.workers) + ", seed: " + std::to_string(opts.seed)};
    if (formula == Formula::lemma1) comments.push_back(std::string("lemma1 prefactor convention: ") + product_tail_convention());
    comments.push_back("tolerance schedule: |ratio-1| <= max(" + short_number(cfg.compare.tolerance) +
                       ", 3*std_error/asym_value) at the largest u, and |ratio-1| nonincreasing over the grid");
    for (const std::string& name : order) {
        const TrendSummary t = summarize_trend(name, series[name], cfg.compare.tolerance);
        std::string ratios;
        for (double r : t.ratios) ratios += (ratios.empty() ? "" : ";") + fmt("%.6g", r);
        comments.push_back("compare " + name + " vs " + to_string(formula) + ": ratios=" + ratios +
                           " nonincreasing=" + (t.nonincreasing ? "yes" : "no") +
                           " strictly_decreasing=" + (t.strictly_decreasing ? "yes" : "no") +
                           " final_deviation=" + fmt("%.6g", t.final_deviation) +
                           " allowance=" + fmt("%.6g", t.final_allowance) + " -> " + (t.pass ? "PASS" : "FAIL"));
    }
    res.output = render(res.rows, comments);
    res.exit_code = rows_exit_code(res.rows);
    return res;
}

CommandResult cmd_validate(const ExperimentConfig& cfg, const RunOverrides&) {
    std::vector<std::string> lines;
    bool any_fail = false;
    auto report = [&](bool pass, const std::string& name, const std::string& detail) {
        any_fail = any_fail || !pass;
        lines.push_back(std::string(pass ? "PASS " : "FAIL ") + name + " " + detail);
    };
    const ValidateConfig& v = cfg.validate;

    if (cfg.claim_count) {
        const ClaimCountSpec& N = *cfg.claim_count;
        const MomentCheck mc = check_moment_condition(N);
        const std::string law = "(" + N.family_name() + ", delta = " + short_number(N.delta) + ")";
        if (mc.finite) report(true, "conN", "E[(1+delta)^N] = " + short_number(mc.value) + " " + law);
        else report(false, "conN", "condition (conN) violated: " + mc.violated + " " + law);
    }

    if (v.rho_n || v.rho) {
        if (!v.rho_n || !v.rho) {
            report(false, "rhon", "needs both validate.rho_n and validate.rho");
        } else if (is_product(cfg)) {
            report(false, "rhon", "the product model has no claim correlation matrix");
        } else {
            try {
                std::size_t n = 2;
                if (v.n) n = *v.n;
                else if (const auto* g = std::get_if<GaussianModel>(&cfg.model); g && !g->rows.empty()) n = g->rows.size();
                else if (cfg.claim_count && cfg.claim_count->max_support()) n = std::max<std::size_t>(2, *cfg.claim_count->max_support());
                const CorrelationModel m = is_factor(cfg)
                                               ? build_equicorrelated(n, factor_correlation(std::get<FactorModelSpec>(cfg.model).rho))
                                               : std::get<GaussianModel>(cfg.model).correlation_for(n);
                const RhonReport r = check_rhon(m, *v.rho_n, *v.rho);
                std::string detail = "max off-diagonal = " + short_number(m.max_off_diagonal()) +
                                     (r.holds ? " <= " : " > ") + "max(rho_n, rho) = " + short_number(r.bound) +
                                     " (n = " + std::to_string(n) + ")";
                if (!r.holds) {
                    detail += "; violating pairs:";
                    for (const auto& [i, j] : r.violations)
                        detail += " (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
                }
                report(r.holds, "rhon", detail);
            } catch (const std::exception& e) {
                report(false, "rhon", e.what());
            }
        }
    }

    if (v.rho_seq || v.log_u) {
        if (!v.rho_seq || !v.log_u) {
            report(false, "cnu", "needs both validate.rho_seq and validate.u (or validate.log_u)");
        } else {
            try {
                CnuParams p = v.cnu;
                if (!v.cnu_delta_given && cfg.claim_count) p.delta = cfg.claim_count->delta;
                p.validate();
                const CnuReport r = check_cnu_at_log(*v.rho_seq, *v.log_u, p);
                report(r.holds, "cnu",
                       "rho_n(u) = " + short_number(r.rho_n_u) + (r.holds ? " <= " : " > ") +
                           "1 - c* loglog u / log u = " + short_number(r.bound) + " (rho_n = " + v.rho_seq->describe() +
                           ", log u = " + short_number(*v.log_u) + ", n(u) = " + std::to_string(r.n_u) +
                           ", eps(u) = " + short_number(r.epsilon) + ", c* = " + short_number(p.c_star) +
                           ", eta = " + short_number(p.eta) + ", delta = " + short_number(p.delta) + ")");
            } catch (const std::exception& e) {
                report(false, "cnu", e.what());
            }
        }
    }

    CommandResult res;
    if (lines.empty()) lines.push_back("# nothing to validate: give claim_count, validate.rho_n/rho or validate.rho_seq/u");
    for (const std::string& l : lines) res.output += l + '\n';
    res.exit_code = any_fail ? kExitValidation : kExitOk;
    return res;
}

}  // namespace tailkit
