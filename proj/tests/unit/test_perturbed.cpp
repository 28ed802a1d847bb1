#include "doctest.h"

#include "tailkit/errors.hpp"
#include "tailkit/normal.hpp"
#include "tailkit/perturbed.hpp"

#include <cmath>

using namespace tailkit;

namespace {

double empirical_tail(const PerturbedTailSpec& spec, double log_u, int draws, std::uint64_t seed) {
    Rng rng(seed);
    int hits = 0;
    for (int k = 0; k < draws; ++k) hits += spec.sample_log(rng) > log_u;
    return hits / static_cast<double>(draws);
}

}  // namespace

TEST_CASE("identity L is the exact log-normal law") {
    const PerturbedTailSpec spec(RegVaryingSpec::identity());
    CHECK(spec.is_lognormal());
    for (double t : {-3.0, 0.0, 1.5, 3.0, 12.0})
        CHECK(spec.log_survival_at_log(t) == log_std_normal_sf(t));
    constexpr int kDraws = 1'000'000;
    const double p = 0.0013498980316300945267;
    const double se = std::sqrt(p * (1 - p) / kDraws);
    CHECK(std::abs(empirical_tail(spec, 3.0, kDraws, 5) - p) < 4.0 * se);
}

TEST_CASE("survival equals G above the splice and is continuous there") {
    const RegVaryingSpec L{0.1, 0.0, 1.0};
    const PerturbedTailSpec spec(L);
    CHECK(spec.log_splice() > 1.0);
    for (double t = spec.log_splice(); t < 50.0; t += 0.7)
        CHECK(spec.log_survival_at_log(t) == spec.log_tail_formula(t));
    const double ts = spec.log_splice();
    CHECK(std::exp(spec.log_survival_at_log(ts - 1e-9)) == doctest::Approx(std::exp(spec.log_tail_formula(ts))).epsilon(1e-7));
    double prev = 0.0;
    for (double t = -5.0; t < 40.0; t += 0.01) {
        const double s = spec.log_survival_at_log(t);
        CHECK(s <= prev);
        prev = s;
    }
}

TEST_CASE("quantile round trip") {
    for (const RegVaryingSpec& L : {RegVaryingSpec::identity(), RegVaryingSpec{0.1, 0.0, 1.0},
                                    RegVaryingSpec{2.0, 0.3, -0.5}}) {
        const PerturbedTailSpec spec(L);
        for (double v : {0.5, 1e-2, 1e-4, 1e-6, 1e-12}) {
            const double t = spec.quantile_at_log(v);
            CHECK(std::abs(std::exp(spec.log_survival_at_log(t)) - v) <= 1e-8 * v);
        }
    }
}

TEST_CASE("perturbed sampler reproduces G") {
    const PerturbedTailSpec spec(RegVaryingSpec{0.1, 0.0, 1.0});
    const double g = 0.1 * 4.0 * std::exp(log_std_normal_sf(4.0));
    constexpr int kDraws = 2'000'000;
    const double se = std::sqrt(g * (1 - g) / kDraws);
    CHECK(std::abs(empirical_tail(spec, 4.0, kDraws, 17) - g) < 4.0 * se);
    CHECK(std::abs(spec.survival(std::exp(4.0)) - g) < 1e-15);
}

TEST_CASE("density integrates to the survival") {
    const PerturbedTailSpec spec(RegVaryingSpec{1.5, 0.2, 0.5});
    // trapezoid over [a, b] in t
    const double a = -2.0, b = 6.0;
    const int steps = 200'000;
    const double h = (b - a) / steps;
    double mass = 0.5 * (std::exp(spec.log_density_at_log(a)) + std::exp(spec.log_density_at_log(b)));
    for (int k = 1; k < steps; ++k) mass += std::exp(spec.log_density_at_log(a + k * h));
    mass *= h;
    const double expected = std::exp(spec.log_survival_at_log(a)) - std::exp(spec.log_survival_at_log(b));
    CHECK(mass == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("inadmissible tails") {
    CHECK_THROWS_AS(PerturbedTailSpec(RegVaryingSpec{1.0, 0.0, 0.0}, 0.5), DomainError);
    CHECK_THROWS_AS(PerturbedTailSpec(RegVaryingSpec{1e30, 0.0, 0.0}, 1.2), DomainError);
    CHECK_THROWS_AS(PerturbedTailSpec(RegVaryingSpec{1.0, 40.0, 0.0}), DomainError);
    const PerturbedTailSpec big(RegVaryingSpec{50.0, 1.0, 0.0});
    CHECK(big.log_tail_formula(big.log_splice()) < 0.0);
    CHECK_THROWS_AS(big.quantile_at_log(0.0), DomainError);
}
