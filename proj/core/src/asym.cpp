#include "tailkit/asym.hpp"

#include "tailkit/errors.hpp"
#include "tailkit/normal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tailkit {

namespace {

constexpr double kThetaRelTol = 1e-12;

void require_log_u(double log_u) {
    if (!(log_u > 1.0) || !std::isfinite(log_u))
        throw DomainError("asymptotic formulas require u > e");
}

// ln[ 1/(sqrt(2 pi) log u) exp(-(log u)^2/2) ] = ln phi(log u) - ln log u
double log_mills_leading(double log_u) { return log_std_normal_pdf(log_u) - std::log(log_u); }

// ln[ L(u^{rho^2}) L(u^{1-rho^2}) ]. At rho = 0 the first factor sits at
// u^0 = 1 where u^beta (log u)^alpha is taken as 1, leaving the scale C.
double log_split_slowly_varying(const RegVaryingSpec& L, double rho, double log_u) {
    const double r2 = rho * rho;
    if (r2 == 0.0) return std::log(L.scale) + log_rv_eval_at_log(L, log_u);
    return log_rv_eval_at_log(L, r2 * log_u) + log_rv_eval_at_log(L, (1.0 - r2) * log_u);
}

Probability scaled(double factor, double log_rest) {
    if (factor == 0.0) return Probability::zero();
    return Probability::from_log(std::log(factor) + log_rest);
}

}  // namespace

void ProductTailParams::validate() const {
    if (!(sigma1 > 0.0) || !(sigma2 > 0.0) || !std::isfinite(sigma1) || !std::isfinite(sigma2))
        throw DomainError("product tail: sigma1 and sigma2 must be finite and > 0");
    L1.validate();
    L2.validate();
}

double TailRatios::at(std::size_t i) const {
    if (i == 0) throw DomainError("tail ratios are indexed from 1");
    return i <= head.size() ? head[i - 1] : rest;
}

double TailRatios::sup() const {
    double s = rest;
    for (double c : head) s = std::max(s, c);
    return s;
}

bool TailRatios::is_constant() const {
    return std::all_of(head.begin(), head.end(), [this](double c) { return c == rest; });
}

double TailRatios::partial_sum(std::uint64_t n) const {
    double acc = 0.0;
    const std::uint64_t k = std::min<std::uint64_t>(n, head.size());
    for (std::uint64_t i = 0; i < k; ++i) acc += head[i];
    if (n > k) acc += static_cast<double>(n - k) * rest;
    return acc;
}

void TailRatios::validate() const {
    auto bad = [](double c) { return !(c >= 0.0) || !std::isfinite(c); };
    if (bad(rest) || std::any_of(head.begin(), head.end(), bad))
        throw DomainError("tail ratios c_i must be finite and >= 0");
}

std::string to_string(Idiosyncratic k) {
    return k == Idiosyncratic::standard_normal ? "standard-normal" : "l-perturbed";
}

void FactorModelSpec::validate() const {
    if (!(rho >= 0.0 && rho < 1.0)) throw DomainError("factor model: rho must lie in [0,1)");
    base_tail.validate();
    c.validate();
    if (idiosyncratic == Idiosyncratic::standard_normal && !base_tail.is_identity())
        throw DomainError("factor model: standard-normal idiosyncratic part needs the identity base tail "
                          "(C=1, beta=0, alpha=0); use l-perturbed");
}

const char* product_tail_convention() {
    return "sigma*exp(sigma_*^2(beta1-beta2)^2/2)*L1(u^gamma)*L2(u^(1-gamma))/(sqrt(2pi)log u)"
           "*exp(-(log u)^2/(2sigma^2)) [sigma prefactor; the sigma^2*Psi form is off by sigma^2]";
}

Probability product_tail_asym_at_log(const ProductTailParams& p, double log_u) {
    require_log_u(log_u);
    p.validate();
    const double g = p.gamma();
    const double s = p.sigma();
    const double ss = p.sigma_star();
    const double db = p.L1.index - p.L2.index;
    const double log_val = std::log(s) + 0.5 * ss * ss * db * db + log_rv_eval_at_log(p.L1, g * log_u) +
                           log_rv_eval_at_log(p.L2, (1.0 - g) * log_u) - kLogSqrt2Pi - std::log(log_u) -
                           log_u * log_u / (2.0 * s * s);
    return Probability::from_log(log_val);
}

Probability product_tail_asym(const ProductTailParams& p, double u) {
    if (!(u > 0.0)) throw DomainError("asymptotic formulas require u > e");
    return product_tail_asym_at_log(p, std::log(u));
}

Probability marginal_tail_asym_at_log(const FactorModelSpec& m, std::size_t i, double log_u) {
    require_log_u(log_u);
    m.validate();
    return scaled(m.c.at(i), log_split_slowly_varying(m.base_tail, m.rho, log_u) + log_mills_leading(log_u));
}

Probability marginal_tail_asym(const FactorModelSpec& m, std::size_t i, double u) {
    if (!(u > 0.0)) throw DomainError("asymptotic formulas require u > e");
    return marginal_tail_asym_at_log(m, i, std::log(u));
}

Probability finite_sum_tail_asym_at_log(std::uint64_t n, double log_u) {
    if (n < 1) throw DomainError("finite_sum_tail_asym: n must be >= 1");
    require_log_u(log_u);
    return Probability::from_log(std::log(static_cast<double>(n)) + log_std_normal_sf(log_u));
}

Probability finite_sum_tail_asym(std::uint64_t n, double u) {
    if (!(u > 0.0)) throw DomainError("asymptotic formulas require u > e");
    return finite_sum_tail_asym_at_log(n, std::log(u));
}

double theta(const FactorModelSpec& m, const ClaimCountSpec& N) {
    m.validate();
    require_moment_condition(N);
    // E[sum_{i<=N} c_i] = sum_i c_i P(N >= i) = rest * E[N] + sum_{i<=head} (c_i - rest) P(N >= i)
    double acc = m.c.rest * mean_n(N);
    double cdf_below = 0.0;  // P(N < i)
    for (std::size_t i = 1; i <= m.c.head.size(); ++i) {
        cdf_below += N.pmf(i - 1);
        const double tail = std::max(0.0, 1.0 - cdf_below);
        acc += (m.c.head[i - 1] - m.c.rest) * tail;
    }
    return acc;
}

double theta_series(const FactorModelSpec& m, const ClaimCountSpec& N) {
    m.validate();
    const double moment = require_moment_condition(N);

    if (auto top = N.max_support()) {
        double acc = 0.0;
        for (std::uint64_t n = 1; n <= *top; ++n) {
            const double p = N.pmf(n);
            if (p > 0.0) acc += p * m.c.partial_sum(n);
        }
        return acc;
    }

    // P(N = k) <= E[(1+delta)^N] q^k with q = 1/(1+delta), so the neglected
    // part after index n is at most sup_c * E[(1+delta)^N] * sum_{k>n} k q^k.
    const double q = 1.0 / (1.0 + N.delta);
    const double sup_c = m.c.sup();
    if (sup_c == 0.0) return 0.0;
    const double mean = mean_n(N);
    double acc = 0.0;
    constexpr std::uint64_t kMaxTerms = 100'000'000;
    for (std::uint64_t n = 1; n < kMaxTerms; ++n) {
        acc += N.pmf(n) * m.c.partial_sum(n);
        const double nd = static_cast<double>(n);
        const double tail_sum = std::pow(q, nd + 1.0) * ((nd + 1.0) * (1.0 - q) + q) / ((1.0 - q) * (1.0 - q));
        const double bound = sup_c * moment * tail_sum;
        if (nd > mean && bound < kThetaRelTol * acc) break;
    }
    return acc;
}

Probability random_sum_tail_asym_thm1_at_log(const FactorModelSpec& m, const ClaimCountSpec& N, double log_u) {
    require_log_u(log_u);
    const double th = theta(m, N);
    return scaled(th, log_split_slowly_varying(m.base_tail, m.rho, log_u) + log_mills_leading(log_u));
}

Probability random_sum_tail_asym_thm1(const FactorModelSpec& m, const ClaimCountSpec& N, double u) {
    if (!(u > 0.0)) throw DomainError("asymptotic formulas require u > e");
    return random_sum_tail_asym_thm1_at_log(m, N, std::log(u));
}

Probability random_sum_tail_asym_thm2_at_log(double mean_N, double log_u) {
    if (!(mean_N > 0.0) || !std::isfinite(mean_N))
        throw DomainError("random_sum_tail_asym_thm2: E[N] must be > 0");
    require_log_u(log_u);
    return Probability::from_log(std::log(mean_N) + log_mills_leading(log_u));
}

Probability random_sum_tail_asym_thm2(double mean_N, double u) {
    if (!(u > 0.0)) throw DomainError("asymptotic formulas require u > e");
    return random_sum_tail_asym_thm2_at_log(mean_N, std::log(u));
}

}  // namespace tailkit
