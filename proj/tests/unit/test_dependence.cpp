#include "doctest.h"

#include "tailkit/dependence.hpp"
#include "tailkit/errors.hpp"
#include "tailkit/estimators.hpp"

#include <array>
#include <vector>
#include <cmath>

using namespace tailkit;

TEST_CASE("factor correlation") {
    CHECK(factor_correlation(0.0) == 0.0);
    CHECK(factor_correlation(0.6) == doctest::Approx(0.36).epsilon(1e-15));
    CHECK_THROWS_AS(factor_correlation(1.0), DomainError);
}

TEST_CASE("equicorrelated construction and spectrum") {
    const auto one = build_equicorrelated(1, 0.7);
    CHECK(one.size() == 1);
    CHECK(one(0, 0) == 1.0);
    const auto id = build_equicorrelated(3, 0.0);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(id(i, j) == (i == j ? 1.0 : 0.0));

    const auto m = build_equicorrelated(3, 0.36);
    // eigenpairs: (1,1,1) -> 1+2r, (1,-1,0) and (1,1,-2) -> 1-r
    const std::array<std::array<double, 3>, 3> vecs{{{1, 1, 1}, {1, -1, 0}, {1, 1, -2}}};
    const std::array<double, 3> vals{1.72, 0.64, 0.64};
    for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t i = 0; i < 3; ++i) {
            double mv = 0.0;
            for (std::size_t j = 0; j < 3; ++j) mv += m(i, j) * vecs[k][j];
            CHECK(mv == doctest::Approx(vals[k] * vecs[k][i]).epsilon(1e-14));
        }
    CHECK(m.max_off_diagonal() == 0.36);
}

TEST_CASE("correlation matrix validation") {
    CHECK_THROWS_AS(CorrelationModel::from_rows({{1.0, 0.5}, {0.4, 1.0}}), DomainError);
    CHECK_THROWS_AS(CorrelationModel::from_rows({{1.0, 0.5}, {0.5, 0.9}}), DomainError);
    CHECK_THROWS_AS(CorrelationModel::from_rows({{1.0, 1.5}, {1.5, 1.0}}), DomainError);
    CHECK_THROWS_AS(CorrelationModel::from_rows({{1.0, 0.5}}), DomainError);
    CHECK_NOTHROW(CorrelationModel::from_rows({{1.0, -0.5}, {-0.5, 1.0}}));
}

TEST_CASE("cholesky") {
    const auto id = cholesky(CorrelationModel::independent(4));
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(id(i, j) == (i == j ? 1.0 : 0.0));

    const auto t = cholesky(CorrelationModel::from_rows({{1.0, 0.6}, {0.6, 1.0}}));
    CHECK(t(0, 0) == 1.0);
    CHECK(t(0, 1) == 0.0);
    CHECK(t(1, 0) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(t(1, 1) == doctest::Approx(0.8).epsilon(1e-15));

    for (std::size_t n : {3u, 10u, 60u})
        for (double r : {0.0, 0.36, 0.9, 0.999999}) {
            const auto m = build_equicorrelated(n, r);
            CHECK(cholesky(m).reconstruction_error(m) <= 1e-12);
        }

    // comonotone boundary: pivots of exactly zero are legitimate
    const auto c = CorrelationModel::from_rows(std::vector<std::vector<double>>(5, std::vector<double>(5, 1.0)));
    CHECK(cholesky(c).reconstruction_error(c) <= 1e-12);

    const auto bad = CorrelationModel::from_rows({{1.0, 0.9, 0.9}, {0.9, 1.0, -0.9}, {0.9, -0.9, 1.0}});
    try {
        cholesky(bad);
        FAIL("expected FactorizationError");
    } catch (const FactorizationError& e) {
        CHECK(e.pivot() == 2);
    }
}

TEST_CASE("cholesky apply") {
    const auto t = cholesky(CorrelationModel::from_rows({{1.0, 0.6}, {0.6, 1.0}}));
    const std::array<double, 2> w{2.0, -1.0};
    std::array<double, 2> out{};
    t.apply(w, out);
    CHECK(out[0] == 2.0);
    CHECK(out[1] == doctest::Approx(0.6 * 2.0 - 0.8).epsilon(1e-15));
}

TEST_CASE("n_of_u") {
    CHECK(n_of_u(std::exp(2.0), CnuParams{9.0, 1.0, std::exp(1.0) - 1.0}) == 4);
    CHECK(n_of_u(std::exp(10.0), CnuParams{9.0, 0.5, 0.1}) == 786);
    CHECK(n_of_u_at_log(10.0, CnuParams{}) == 786);
    CHECK(n_of_u(1.0001, CnuParams{}) == 1);
    CHECK_THROWS_AS(n_of_u(1.0, CnuParams{}), DomainError);
    CHECK_THROWS_AS(CnuParams({8.0, 0.5, 0.1}).validate(), DomainError);

    std::uint64_t prev = 0;
    for (double lu = 0.5; lu < 60.0; lu += 0.25) {
        const auto n = n_of_u_at_log(lu, CnuParams{});
        CHECK(n >= prev);
        prev = n;
        CHECK(n_of_u_at_log(lu, CnuParams{9.0, 0.9, 0.1}) >= n);
        CHECK(n_of_u_at_log(lu, CnuParams{9.0, 0.5, 0.2}) <= n);
    }
}

TEST_CASE("epsilon_of_u") {
    CHECK(epsilon_of_u(std::exp(std::exp(1.0))) == doctest::Approx(4.0 / std::exp(1.0)).epsilon(1e-14));
    CHECK(std::abs(epsilon_of_u_at_log(100.0) - 0.18420680743952365472) < 1e-15);
    CHECK_THROWS_AS(epsilon_of_u(2.0), DomainError);
    double prev = INFINITY;
    for (double lu = std::exp(1.0); lu < 500.0; lu *= 1.1) {
        const double e = epsilon_of_u_at_log(lu);
        CHECK(e <= prev);
        prev = e;
    }
}

TEST_CASE("check_rhon") {
    CHECK(check_rhon(CorrelationModel::independent(4), 0.1, 0.2).holds);
    const auto m = build_equicorrelated(3, 0.5);
    const RhonReport r = check_rhon(m, 0.3, 0.4);
    CHECK_FALSE(r.holds);
    CHECK(r.bound == 0.4);
    CHECK(r.violations.size() == 3);
    CHECK(check_rhon(m, 0.3, 0.6).holds);
    CHECK_THROWS_AS(check_rhon(m, 0.3, 1.0), DomainError);
}

TEST_CASE("check_cnu on the three sequence families") {
    const CnuParams p{9.0, 0.5, 0.1};
    const CnuReport ok = check_cnu_at_log(RhoSequence::constant(0.5), 100.0, p);
    CHECK(ok.holds);
    CHECK(std::abs(ok.bound - 0.58553468326107177688) < 1e-14);
    CHECK_FALSE(check_cnu_at_log(RhoSequence::constant(0.99), 100.0, p).holds);
    CHECK(check_cnu_at_log(RhoSequence::log_sqrt(50.0), 40.0, p).holds);
    CHECK(check_cnu_at_log(RhoSequence::from_table({0.9, 0.5}), 100.0, p).holds);
    CHECK_FALSE(check_cnu_at_log(RhoSequence::from_table({0.1, 0.9}), 100.0, p).holds);
    CHECK_THROWS_AS(check_cnu(RhoSequence::constant(0.5), 2.0, p), DomainError);
}

TEST_CASE("check_cnu is monotone in the sequence") {
    const CnuParams p{};
    for (double lu : {20.0, 60.0, 100.0, 300.0})
        for (double v = 0.0; v < 1.0; v += 0.05)
            if (check_cnu_at_log(RhoSequence::constant(v), lu, p).holds)
                CHECK(check_cnu_at_log(RhoSequence::constant(v * 0.9), lu, p).holds);
}

TEST_CASE("factor model sampling reproduces the pairwise correlation") {
    FactorModelSpec m;
    m.rho = 0.6;
    const FactorSampler sampler(m);
    Rng rng(99);
    constexpr int kDraws = 100'000;
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (int k = 0; k < kDraws; ++k) {
        const FactorDraw d = sample_factor_claims(sampler, 2, rng);
        const double x = std::log(d.claims[0]), y = std::log(d.claims[1]);
        sx += x, sy += y, sxx += x * x, syy += y * y, sxy += x * y;
    }
    const double n = kDraws;
    const double corr = (sxy / n - sx * sy / n / n) /
                        std::sqrt((sxx / n - sx * sx / n / n) * (syy / n - sy * sy / n / n));
    CHECK(std::abs(corr - 0.36) < 3.0 / std::sqrt(n));
}
