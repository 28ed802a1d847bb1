#pragma once

#include "tailkit/claim_count.hpp"
#include "tailkit/probability.hpp"
#include "tailkit/regvary.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace tailkit {

/// Parameters of the scaled product e^{sigma1 Z1 + sigma2 Z2} where
/// P(e^{Zk} > u) ~ Lk(u) Psi(log u).
struct ProductTailParams {
    double sigma1 = 1.0;
    double sigma2 = 1.0;
    RegVaryingSpec L1;
    RegVaryingSpec L2;

    double gamma() const { return sigma1 * sigma1 / (sigma1 * sigma1 + sigma2 * sigma2); }
    double sigma() const { return std::sqrt(sigma1 * sigma1 + sigma2 * sigma2); }
    double sigma_star() const { return sigma1 * sigma2 / sigma(); }

    void validate() const;
};

/// Tail-ratio constants c_i (i >= 1): explicit values for the first few
/// indices, then a constant for the rest. Bounded by construction.
struct TailRatios {
    std::vector<double> head;
    double rest = 1.0;

    static TailRatios constant(double c) { return TailRatios{{}, c}; }

    double at(std::size_t i) const;  // 1-based
    double sup() const;
    bool is_constant() const;
    /// sum_{i=1}^{n} c_i
    double partial_sum(std::uint64_t n) const;

    void validate() const;
};

enum class Idiosyncratic { standard_normal, perturbed };

std::string to_string(Idiosyncratic k);

/// Common-factor claim model X_i = rho Z0 + sqrt(1-rho^2) Z_i, Y_i = e^{X_i}.
/// P(e^{Z0} > u) ~ base_tail(u) Psi(log u) and P(Z_i > u) ~ c_i P(Z0 > u).
struct FactorModelSpec {
    double rho = 0.0;
    RegVaryingSpec base_tail;
    TailRatios c;
    Idiosyncratic idiosyncratic = Idiosyncratic::standard_normal;

    double idiosyncratic_scale() const { return std::sqrt(1.0 - rho * rho); }

    /// rho in [0,1), valid base tail, c_i >= 0 and finite. A standard-normal
    /// idiosyncratic part requires the identity base tail. Throws DomainError.
    void validate() const;
};

// All formulas below take u > e (log u > 1) and throw DomainError otherwise.
// The `_at_log` forms take log u directly so u may exceed the double range.

/// sigma e^{sigma*^2 (beta1-beta2)^2 / 2} L1(u^gamma) L2(u^{1-gamma})
///   / (sqrt(2 pi) log u) * exp(-(log u)^2 / (2 sigma^2)).
/// This is the fully expanded product asymptotic; the variant with prefactor
/// sigma^2 and Psi((log u)/sigma) overstates the tail by a factor sigma^2.
Probability product_tail_asym(const ProductTailParams& p, double u);
Probability product_tail_asym_at_log(const ProductTailParams& p, double log_u);

/// Name of the product-tail prefactor convention in use, for reports.
const char* product_tail_convention();

/// c_i L(u^{rho^2}) L(u^{1-rho^2}) / (sqrt(2 pi) log u) e^{-(log u)^2/2}.
/// For rho = 0 the factor L(u^0) is taken as the scale C of L.
Probability marginal_tail_asym(const FactorModelSpec& m, std::size_t i, double u);
Probability marginal_tail_asym_at_log(const FactorModelSpec& m, std::size_t i, double log_u);

/// n Psi(log u): tail of a sum of n equicorrelated LN(0,1) claims.
Probability finite_sum_tail_asym(std::uint64_t n, double u);
Probability finite_sum_tail_asym_at_log(std::uint64_t n, double log_u);

/// Theta = E[sum_{i<=N} c_i], computed exactly as sum_i c_i P(N >= i).
/// Throws ConditionError when E[(1+delta)^N] is infinite.
double theta(const FactorModelSpec& m, const ClaimCountSpec& N);

/// Theta by direct summation of P(N=n) sum_{i<=n} c_i. Infinite-support laws
/// are truncated once the geometric remaining-mass bound drops below 1e-12 of
/// the accumulated value. Independent route used to cross-check theta().
double theta_series(const FactorModelSpec& m, const ClaimCountSpec& N);

/// Theta L(u^{rho^2}) L(u^{1-rho^2}) / (sqrt(2 pi) log u) e^{-(log u)^2/2};
/// shared by P(S_N > u) and P(Y_{N:N} > u).
Probability random_sum_tail_asym_thm1(const FactorModelSpec& m, const ClaimCountSpec& N, double u);
Probability random_sum_tail_asym_thm1_at_log(const FactorModelSpec& m, const ClaimCountSpec& N, double log_u);

/// E[N] / (sqrt(2 pi) log u) e^{-(log u)^2/2} for Gaussian claim vectors with
/// controlled pairwise correlation.
Probability random_sum_tail_asym_thm2(double mean_N, double u);
Probability random_sum_tail_asym_thm2_at_log(double mean_N, double log_u);

}  // namespace tailkit
