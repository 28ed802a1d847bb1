#pragma once

#include "tailkit/asym.hpp"
#include "tailkit/claim_count.hpp"
#include "tailkit/dependence.hpp"
#include "tailkit/estimators.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace tailkit {

/// Scaled product e^{sigma1 Z1 + sigma2 Z2}; only the product-tail formula
/// and product estimators apply.
struct ProductModel {
    ProductTailParams params;
};

using ModelConfig = std::variant<FactorModelSpec, GaussianModel, ProductModel>;

enum class StatisticChoice { sum, max, both };

enum class Formula { thm1, thm2, eqNN, lemma1, ff };
std::string to_string(Formula f);
std::optional<Formula> parse_formula(const std::string& s);
std::optional<Method> parse_method(const std::string& s);

/// Threshold grid. Values are kept as log u so grids may run past the
/// double range; `u_given` keeps the literal u values of an explicit list.
struct ThresholdGrid {
    std::vector<double> log_u;
    std::vector<double> u_given;

    std::size_t size() const { return log_u.size(); }
    double u_at(std::size_t k) const;
};

struct CompareConfig {
    std::optional<Formula> formula;  // default: first requested formula
    double tolerance = 0.05;
};

struct ValidateConfig {
    std::optional<RhoSequence> rho_seq;
    std::optional<double> log_u;     // threshold for (cnu)
    CnuParams cnu;
    bool cnu_delta_given = false;    // otherwise delta comes from the claim count
    std::optional<double> rho_n;     // (rhon) bounds
    std::optional<double> rho;
    std::optional<std::size_t> n;    // matrix size for (rhon); default max N support or 2
};

struct ExperimentConfig {
    ModelConfig model;
    std::optional<ClaimCountSpec> claim_count;
    ThresholdGrid grid;
    StatisticChoice statistic = StatisticChoice::sum;
    std::vector<Method> estimators;
    std::vector<Formula> formulas;   // empty: every formula the model supports
    std::uint64_t n_samples = 100'000;
    std::uint64_t seed = 1;
    std::optional<unsigned> workers;
    std::optional<std::string> output;
    CompareConfig compare;
    ValidateConfig validate;
};

/// Parses and validates a JSON experiment config. Unknown keys, malformed
/// values and failed model validators throw ConfigError naming the key.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

}  // namespace tailkit
