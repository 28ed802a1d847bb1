#include "doctest.h"

#include "tailkit/asym.hpp"
#include "tailkit/errors.hpp"
#include "tailkit/normal.hpp"

#include <boost/math/distributions/normal.hpp>

#include <cmath>

using namespace tailkit;

namespace {

double exact_normal_sf(double t) {
    return boost::math::cdf(boost::math::complement(boost::math::normal(0.0, 1.0), t));
}

FactorModelSpec factor(double rho, RegVaryingSpec L = {}, TailRatios c = TailRatios::constant(1.0)) {
    FactorModelSpec m;
    m.rho = rho;
    m.base_tail = L;
    m.c = std::move(c);
    m.idiosyncratic = L.is_identity() ? Idiosyncratic::standard_normal : Idiosyncratic::perturbed;
    return m;
}

}  // namespace

TEST_CASE("product tail: unit case against the exact log-normal tail") {
    const ProductTailParams p{1.0, 1.0, {}, {}};
    const double t = 10.0 * std::sqrt(2.0);
    const double ratio = product_tail_asym(p, std::exp(t)).value / exact_normal_sf(t / std::sqrt(2.0));
    CHECK(ratio >= 0.99);
    CHECK(ratio <= 1.01);
}

TEST_CASE("product tail: zero exponent factor and exact symmetry") {
    ProductTailParams p{1.3, 0.4, RegVaryingSpec{2.0, 0.7, 1.0}, RegVaryingSpec{0.5, -0.2, -1.0}};
    ProductTailParams q{p.sigma2, p.sigma1, p.L2, p.L1};
    for (double lu : {2.0, 7.5, 30.0, 400.0}) {
        CHECK(product_tail_asym_at_log(p, lu).log_value ==
              doctest::Approx(product_tail_asym_at_log(q, lu).log_value).epsilon(1e-14));
    }
    CHECK(p.sigma_star() * p.sigma_star() == doctest::Approx(p.gamma() * (1 - p.gamma()) * p.sigma() * p.sigma()));
    // beta1 = beta2 removes the exponential correction entirely
    ProductTailParams e{1.0, 1.0, RegVaryingSpec{1.0, 0.3, 0.0}, RegVaryingSpec{1.0, 0.3, 0.0}};
    const double lu = 9.0;
    const double expected = std::log(std::sqrt(2.0)) + 0.3 * lu - kLogSqrt2Pi - std::log(lu) - lu * lu / 4.0;
    CHECK(product_tail_asym_at_log(e, lu).log_value == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("product tail: domain") {
    CHECK_THROWS_AS(product_tail_asym(ProductTailParams{}, std::exp(1.0)), DomainError);
    CHECK_THROWS_AS(product_tail_asym(ProductTailParams{0.0, 1.0, {}, {}}, 100.0), DomainError);
}

TEST_CASE("marginal tail asymptotic") {
    // phi(4)/4 from mpmath
    CHECK(std::abs(marginal_tail_asym(factor(0.5), 1, std::exp(4.0)).value - 0.000033457556441221337944) < 1e-9);
    CHECK(marginal_tail_asym(factor(0.0), 1, std::exp(5.0)).log_value ==
          marginal_tail_asym(factor(0.9), 1, std::exp(5.0)).log_value);
    CHECK(marginal_tail_asym(factor(0.5, {}, TailRatios{{0.0}, 1.0}), 1, 100.0).value == 0.0);
    CHECK(marginal_tail_asym(factor(0.5, {}, TailRatios{{0.0}, 1.0}), 2, 100.0).value > 0.0);
}

TEST_CASE("finite sum asymptotic") {
    CHECK(finite_sum_tail_asym(1, std::exp(3.0)).value == doctest::Approx(0.0013498980316300945267).epsilon(1e-13));
    CHECK(finite_sum_tail_asym(2, std::exp(6.0)).value == doctest::Approx(1.9731752900753962814e-9).epsilon(1e-12));
    CHECK_THROWS_AS(finite_sum_tail_asym(0, 100.0), DomainError);
}

TEST_CASE("theta") {
    const auto geo = ClaimCountSpec::geometric(0.5, 0.5);
    CHECK(theta(factor(0.3), geo) == mean_n(geo));
    CHECK(theta(factor(0.3), ClaimCountSpec::fixed(2)) == 2.0);
    CHECK(theta(factor(0.3, {}, TailRatios{{0.5, 1.5}, 2.0}), ClaimCountSpec::fixed(2)) == doctest::Approx(2.0));
    // truncated-series route and a brute-force partial sum agree with the identity
    const FactorModelSpec m = factor(0.3, {}, TailRatios{{0.5, 1.5, 0.0}, 0.8});
    for (const auto& N : {geo, ClaimCountSpec::poisson(2.5, 1.0), ClaimCountSpec::truncated({0.1, 0.2, 0.3, 0.4}, 1.0)}) {
        double brute = 0.0;
        for (std::uint64_t n = 1; n < 400; ++n) brute += N.pmf(n) * m.c.partial_sum(n);
        CHECK(theta(m, N) == doctest::Approx(brute).epsilon(1e-12));
        CHECK(theta_series(m, N) == doctest::Approx(brute).epsilon(1e-11));
    }
    CHECK_THROWS_AS(theta(factor(0.3), ClaimCountSpec::geometric(0.2, 0.5)), ConditionError);
}

TEST_CASE("theta of geometric(0.5) is its mean") {
    // ten-million-term partial sum of n P(N = n)
    const auto geo = ClaimCountSpec::geometric(0.5, 0.5);
    double partial = 0.0;
    for (std::uint64_t n = 1; n < 10'000'000 && n < 2000; ++n) partial += static_cast<double>(n) * geo.pmf(n);
    CHECK(theta(factor(0.0), geo) == doctest::Approx(partial).epsilon(1e-14));
    CHECK(theta(factor(0.0), geo) == 1.0);
}

TEST_CASE("thm1 form reduces to the thm2 form") {
    for (const auto& N : {ClaimCountSpec::fixed(3), ClaimCountSpec::geometric(0.4, 0.3), ClaimCountSpec::poisson(1.7, 2.0)})
        for (double rho : {0.0, 0.3, 0.95})
            for (double lu : {1.5, 4.0, 12.0, 80.0})
                CHECK(random_sum_tail_asym_thm1_at_log(factor(rho), N, lu).log_value ==
                      random_sum_tail_asym_thm2_at_log(mean_n(N), lu).log_value);
}

TEST_CASE("thm1 form vs the exact finite-sum tail") {
    const double lu = 20.0;
    const double r = random_sum_tail_asym_thm1_at_log(factor(0.4), ClaimCountSpec::fixed(4), lu).value /
                     finite_sum_tail_asym_at_log(4, lu).value;
    // Psi(t) t / phi(t) = 1 - 1/t^2 + O(t^-4)
    CHECK(std::abs(r - 1.0) < 1.0 / (lu * lu));
    CHECK(random_sum_tail_asym_thm1(factor(0.4, {}, TailRatios::constant(0.0)), ClaimCountSpec::fixed(4), 1e5).value == 0.0);
}

TEST_CASE("thm2 form") {
    CHECK(std::abs(random_sum_tail_asym_thm2(1.0, std::exp(4.0)).value - 0.000033457556441221337944) < 1e-9);
    for (double lu : {2.0, 6.0, 33.0})
        CHECK(random_sum_tail_asym_thm2_at_log(2.0, lu).value == doctest::Approx(2.0 * random_sum_tail_asym_thm2_at_log(1.0, lu).value).epsilon(1e-15));
    const double r = random_sum_tail_asym_thm2_at_log(1.7, 30.0).value / std::exp(log_std_normal_sf(30.0));
    CHECK(std::abs(r / 1.7 - 1.0) < 0.0015);
    CHECK_THROWS_AS(random_sum_tail_asym_thm2(0.0, 100.0), DomainError);
}

TEST_CASE("dependence parameter matters only through a non-constant L") {
    const auto N = ClaimCountSpec::geometric(0.5, 0.5);
    const RegVaryingSpec constant_L{0.3, 0.0, 0.0};
    for (double lu : {3.0, 10.0, 50.0}) {
        const double base = random_sum_tail_asym_thm1_at_log(factor(0.0, constant_L), N, lu).log_value;
        for (double rho : {0.1, 0.5, 0.9, 0.999})
            CHECK(random_sum_tail_asym_thm1_at_log(factor(rho, constant_L), N, lu).log_value == base);
    }
    const RegVaryingSpec varying{1.0, 0.5, 1.0};
    for (double lu : {3.0, 10.0, 50.0})
        CHECK(random_sum_tail_asym_thm1_at_log(factor(0.5, varying), N, lu).log_value !=
              random_sum_tail_asym_thm1_at_log(factor(0.0, varying), N, lu).log_value);
}

TEST_CASE("outputs are positive and decreasing in u") {
    const auto N = ClaimCountSpec::poisson(2.0, 1.0);
    const FactorModelSpec m = factor(0.6, RegVaryingSpec{1.0, 0.2, 1.0});
    const ProductTailParams p{0.8, 1.1, RegVaryingSpec{1.0, 0.1, 0.0}, {}};
    double prev[4] = {INFINITY, INFINITY, INFINITY, INFINITY};
    for (double lu = 3.0; lu < 200.0; lu += 0.5) {
        const double cur[4] = {random_sum_tail_asym_thm1_at_log(m, N, lu).log_value,
                               random_sum_tail_asym_thm2_at_log(2.0, lu).log_value,
                               product_tail_asym_at_log(p, lu).log_value,
                               marginal_tail_asym_at_log(m, 1, lu).log_value};
        for (int k = 0; k < 4; ++k) {
            CHECK(std::isfinite(cur[k]));
            CHECK(cur[k] < prev[k]);
            prev[k] = cur[k];
        }
    }
}

TEST_CASE("factor model validation") {
    CHECK_THROWS_AS(factor(1.0).validate(), DomainError);
    CHECK_THROWS_AS(factor(-0.1).validate(), DomainError);
    FactorModelSpec m = factor(0.5);
    m.base_tail = RegVaryingSpec{2.0, 0.0, 0.0};
    m.idiosyncratic = Idiosyncratic::standard_normal;
    CHECK_THROWS_AS(m.validate(), DomainError);
    CHECK_THROWS_AS(factor(0.5, {}, TailRatios{{-1.0}, 1.0}).validate(), DomainError);
}
