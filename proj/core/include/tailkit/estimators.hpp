#pragma once

#include "tailkit/asym.hpp"
#include "tailkit/claim_count.hpp"
#include "tailkit/dependence.hpp"
#include "tailkit/estimate.hpp"
#include "tailkit/perturbed.hpp"
#include "tailkit/rng.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace tailkit {

enum class Statistic { sum, max };

inline std::string to_string(Statistic s) { return s == Statistic::sum ? "sum" : "max"; }

/// Sample budget and stream layout. Samples are split over `workers`
/// independent streams (stream k seeded by stream_seed(seed, k)); results
/// are a deterministic function of (seed, workers).
struct McOptions {
    std::uint64_t n_samples = 100'000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
};

/// Draws for the common-factor model. Holds one tail law per distinct c_i,
/// built once; const member functions are safe to call concurrently.
class FactorSampler {
public:
    /// Throws DomainError when the model cannot be simulated: some c_i = 0,
    /// or a standard-normal idiosyncratic part with c_i != 1.
    explicit FactorSampler(FactorModelSpec m);

    const FactorModelSpec& model() const { return model_; }
    const PerturbedTailSpec& common_law() const { return common_; }
    /// Law of e^{Z_i}.
    const PerturbedTailSpec& idiosyncratic_law(std::size_t i) const;

    double sample_z0(Rng& rng) const { return common_.sample_log(rng); }
    double sample_zi(std::size_t i, Rng& rng) const { return idiosyncratic_law(i).sample_log(rng); }

    /// ln P(e^{sqrt(1-rho^2) Z_i} > e^x)
    double log_xi_survival(std::size_t i, double x) const;

private:
    FactorModelSpec model_;
    PerturbedTailSpec common_;
    std::vector<PerturbedTailSpec> head_laws_;
    PerturbedTailSpec rest_law_;
};

struct FactorDraw {
    double z0 = 0.0;
    std::vector<double> claims;
};

/// Z0 and Y_i = e^{rho Z0} e^{sqrt(1-rho^2) Z_i}, i = 1..n.
FactorDraw sample_factor_claims(const FactorSampler& s, std::uint64_t n, Rng& rng);
FactorDraw sample_factor_claims(const FactorModelSpec& m, std::uint64_t n, Rng& rng);

/// Gaussian claim vectors: for each n the correlation matrix is generated
/// (independent, equicorrelated r) or is the leading n x n block of an
/// explicit matrix.
struct GaussianModel {
    CorrelationModel::Kind kind = CorrelationModel::Kind::independent;
    double r = 0.0;
    std::vector<std::vector<double>> rows;

    static GaussianModel independent() { return {}; }
    static GaussianModel equicorrelated(double r) { return {CorrelationModel::Kind::equicorrelated, r, {}}; }
    static GaussianModel from_rows(std::vector<std::vector<double>> rows) {
        return {CorrelationModel::Kind::explicit_matrix, 0.0, std::move(rows)};
    }

    /// Throws DomainError when n exceeds an explicit matrix.
    CorrelationModel correlation_for(std::size_t n) const;

    /// The equivalent common-factor model, when the law is exchangeable
    /// (independent or equicorrelated with r >= 0): rho = sqrt(r).
    std::optional<FactorModelSpec> as_factor_model() const;

    void validate() const;
};

/// Y = exp(T w), w iid N(0,1).
std::vector<double> sample_gaussian_claims(const CholeskyFactor& chol, Rng& rng);

using ClaimModel = std::variant<FactorModelSpec, GaussianModel>;

struct CrudePair {
    Estimate sum;
    Estimate max;
};

/// Indicator-mean estimates of P(S_N > u) and P(Y_{N:N} > u) from the same
/// paths, so max <= sum holds path by path. N = 0 contributes 0.
CrudePair crude_mc_tail_both(const ClaimModel& model, const ClaimCountSpec& N, double u, const McOptions& opts);

Estimate crude_mc_tail(const ClaimModel& model, const ClaimCountSpec& N, double u, Statistic stat,
                       const McOptions& opts);

/// Crude estimate of P(e^{sigma1 Z1 + sigma2 Z2} > u) with perturbed-tail laws.
Estimate crude_product_tail(const ProductTailParams& p, double u, const McOptions& opts);

struct AkOptions {
    /// Draw Z0 from N(rho log u, 1) and reweight by the likelihood ratio.
    bool shift_common_factor = true;
};

/// Conditional estimator for the factor model. Given (Z0, N = n) the terms
/// xi_i = e^{sqrt(1-rho^2) Z_i} are iid and, with v = u e^{-rho Z0},
///   sum: P(sum xi > v | Z0) = n E[ Fbar_xi(max(M_{n-1}, v - S_{n-1})) ]
///   max: P(max xi > v | Z0) = 1 - (1 - Fbar_xi(v))^n
/// Requires constant c. Unbiased; deterministic given (seed, workers).
Estimate ak_conditional_tail(const FactorModelSpec& m, const ClaimCountSpec& N, double u, const McOptions& opts,
                             Statistic stat = Statistic::sum, const AkOptions& ak = {});

/// Mean share of the largest claim in the sum, given S_n > u, for n claims
/// of the factor model. Z0 is integrated out in closed form and one
/// idiosyncratic term is mean-shifted (defensive mixture over the index).
struct ShareEstimate {
    double share = 0.0;
    double std_error = 0.0;   // delta-method standard error of the ratio
    Estimate exceedance;      // P(S_n > u) from the same samples
};

ShareEstimate big_jump_share(const FactorModelSpec& m, std::uint64_t n, double u, const McOptions& opts);

}  // namespace tailkit
