#pragma once

#include "tailkit/rng.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace tailkit {

struct FixedCount {
    std::uint64_t n = 0;
};

/// P(N = n) = p (1-p)^n on {0, 1, 2, ...}.
struct GeometricCount {
    double p = 0.5;
};

struct PoissonCount {
    double lambda = 1.0;
};

/// P(N = n) = probs[n] for n < probs.size(), 0 beyond.
struct TruncatedCount {
    std::vector<double> probs;
};

using CountLaw = std::variant<FixedCount, GeometricCount, PoissonCount, TruncatedCount>;

/// Law of the random claim number N together with the delta for which the
/// caller asserts E[(1+delta)^N] < infinity.
struct ClaimCountSpec {
    CountLaw law;
    double delta = 1.0;

    static ClaimCountSpec fixed(std::uint64_t n, double delta = 1.0);
    static ClaimCountSpec geometric(double p, double delta);
    static ClaimCountSpec poisson(double lambda, double delta);
    static ClaimCountSpec truncated(std::vector<double> probs, double delta);

    /// Parameter ranges and, for truncated laws, total mass 1 within 1e-12.
    /// Throws DomainError.
    void validate() const;

    double pmf(std::uint64_t n) const;

    /// Largest n with positive mass, when the support is finite.
    std::optional<std::uint64_t> max_support() const;

    /// Short family name: fixed | geometric | poisson | truncated.
    std::string family_name() const;
};

/// Outcome of the moment check for E[(1+delta)^N].
struct MomentCheck {
    bool finite = false;
    double value = 0.0;     // E[(1+delta)^N] when finite
    std::string violated;   // the failing inequality, when not finite
};

MomentCheck check_moment_condition(const ClaimCountSpec& s);

/// As check_moment_condition but throws ConditionError("conN", ...) on divergence.
double require_moment_condition(const ClaimCountSpec& s);

double mean_n(const ClaimCountSpec& s);

std::uint64_t sample_n(const ClaimCountSpec& s, Rng& rng);

}  // namespace tailkit
