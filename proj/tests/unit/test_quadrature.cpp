#include "doctest.h"

#include "tailkit/dependence.hpp"
#include "tailkit/errors.hpp"
#include "tailkit/normal.hpp"
#include "tailkit/quadrature.hpp"

#include <cmath>
#include <vector>

using namespace tailkit;

namespace {

double psi(double t) { return std::exp(log_std_normal_sf(t)); }

}  // namespace

TEST_CASE("log_integrate on closed forms") {
    // int exp(-x^2/2) over R = sqrt(2 pi)
    const LogIntegral g = log_integrate([](double x) { return -0.5 * x * x; }, -INFINITY, INFINITY, {0.0});
    CHECK(g.log_value == doctest::Approx(0.5 * std::log(2.0 * M_PI)).epsilon(1e-12));
    // far-shifted Gaussian: the integral is ~e^-5000 and still resolved
    const LogIntegral far = log_integrate([](double x) { return -0.5 * (x - 100.0) * (x - 100.0) - 5000.0; },
                                          0.0, INFINITY, {});
    CHECK(far.log_value == doctest::Approx(-5000.0 + 0.5 * std::log(2.0 * M_PI)).epsilon(1e-12));
    const LogIntegral ex = log_integrate([](double x) { return -x; }, 0.0, 3.0, {});
    CHECK(std::exp(ex.log_value) == doctest::Approx(1.0 - std::exp(-3.0)).epsilon(1e-12));
}

TEST_CASE("exact two-claim sum") {
    struct Ref {
        double log_u, value;
    };
    const std::vector<Ref> refs{{1.0, 0.44334604033060937567}, {3.0, 0.0037761641748578301481},
                                {4.0, 7.3809954476257020019e-5}, {6.0, 2.0249589065487155194e-9},
                                {8.0, 1.2498191151122099816e-15}, {10.0, 1.5251238063254821634e-23}};
    for (const Ref& r : refs) {
        const Estimate e = exact_sum2_quadrature_at_log(r.log_u);
        CHECK(e.method == Method::quadrature);
        CHECK(e.std_error == 0.0);
        CHECK(e.value == doctest::Approx(r.value).epsilon(1e-8));
    }
    const double ratio = exact_sum2_quadrature(std::exp(6.0)).value / (2.0 * psi(6.0));
    CHECK(ratio >= 1.0);
    CHECK(ratio <= 1.1);
    CHECK(exact_sum2_quadrature(1e-11).value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("split and full decompositions agree") {
    for (double lu : {-2.0, 0.5, 2.0, 5.0, 9.0, 20.0}) {
        const double a = exact_sum2_quadrature_at_log(lu, {}, Sum2Form::split).value;
        const double b = exact_sum2_quadrature_at_log(lu, {}, Sum2Form::full).value;
        CHECK(std::abs(a - b) <= 1e-8 * a);
    }
}

TEST_CASE("max tail oracle") {
    for (double rho : {0.0, 0.3, 0.9})
        for (double lu : {0.5, 3.0, 7.0})
            CHECK(std::abs(max_tail_quadrature_at_log(1, rho, lu).value - psi(lu)) <= 1e-10 * psi(lu));
    for (std::uint64_t n : {2u, 3u, 10u})
        for (double lu : {0.5, 3.0, 7.0}) {
            const double exact = -std::expm1(n * std::log1p(-psi(lu)));
            CHECK(std::abs(max_tail_quadrature_at_log(n, 0.0, lu).value - exact) <= 1e-10 * exact);
        }
    struct Ref {
        std::uint64_t n;
        double log_u, value;
    };
    for (const Ref& r : std::vector<Ref>{{3, 4.0, 9.463112899208627396e-5}, {3, 5.0, 8.5960638007543799478e-7},
                                         {3, 6.0, 2.9596860012118765374e-9}, {3, 8.0, 1.8662881209356970649e-15},
                                         {2, 5.0, 5.7318676194946803244e-7}})
        CHECK(max_tail_quadrature_at_log(r.n, 0.6, r.log_u).value == doctest::Approx(r.value).epsilon(1e-8));
}

TEST_CASE("bivariate joint tail") {
    for (double la : {0.5, 2.0, 4.0})
        for (double lb : {1.0, 3.0}) {
            const double v = bivariate_joint_tail_at_log(0.0, la, lb).value;
            CHECK(std::abs(v - psi(la) * psi(lb)) <= 1e-8 * v);
        }
    const double la = 3.0;
    const double comonotone = bivariate_joint_tail_at_log(0.999, la, la).value;
    CHECK(comonotone < psi(la));
    CHECK(comonotone > 0.9 * psi(la));
    CHECK(bivariate_joint_tail(0.3, std::exp(2.0), std::exp(1.5)).value ==
          doctest::Approx(0.0046787163226410558205).epsilon(1e-8));
    // symmetric in (a, b)
    CHECK(bivariate_joint_tail_at_log(0.4, 1.0, 2.5).value ==
          doctest::Approx(bivariate_joint_tail_at_log(0.4, 2.5, 1.0).value).epsilon(1e-8));
}

TEST_CASE("joint tail at the u^{1-eps} scale in the log domain") {
    for (const auto& [lu, expected] : std::vector<std::pair<double, double>>{{25.0, -103.905168}, {50.0, -794.662601}}) {
        const double la = lu * (1.0 - epsilon_of_u_at_log(lu));
        CHECK(bivariate_joint_tail_at_log(0.5, la, la).log_value == doctest::Approx(expected).epsilon(1e-8));
    }
}

TEST_CASE("joint exceedances are negligible once the correlation bound holds") {
    // r below 1 - c* loglog u / log u: the ratio to Psi(log u) must fall along the grid
    const double r = 0.2;
    double prev = INFINITY;
    for (double lu : {200.0, 400.0, 800.0, 1600.0}) {
        REQUIRE(r <= 1.0 - 9.0 * std::log(lu) / lu);
        const double la = lu * (1.0 - epsilon_of_u_at_log(lu));
        const double log_ratio = bivariate_joint_tail_at_log(r, la, la).log_value - log_std_normal_sf(lu);
        CHECK(log_ratio < prev);
        prev = log_ratio;
    }
    CHECK(prev < std::log(1e-3));
}

TEST_CASE("doubling the node budget changes results by less than ten tolerances") {
    const QuadOptions base{1e-9, 7};
    const QuadOptions doubled{1e-9, 8};
    for (double lu : {2.0, 6.0, 10.0}) {
        const double a = exact_sum2_quadrature_at_log(lu, base).value;
        const double b = exact_sum2_quadrature_at_log(lu, doubled).value;
        CHECK(std::abs(a - b) <= 10.0 * 1e-9 * b);
        const double c = max_tail_quadrature_at_log(3, 0.6, lu, base).value;
        const double d = max_tail_quadrature_at_log(3, 0.6, lu, doubled).value;
        CHECK(std::abs(c - d) <= 10.0 * 1e-9 * d);
    }
    const double e = bivariate_joint_tail_at_log(0.5, 20.0, 20.0, {1e-8, 7}).log_value;
    const double f = bivariate_joint_tail_at_log(0.5, 20.0, 20.0, {1e-8, 8}).log_value;
    CHECK(std::abs(e - f) <= 10.0 * 1e-8);
}

TEST_CASE("product tail quadrature against the exact log-normal case") {
    const ProductTailParams p{1.0, 1.0, {}, {}};
    for (double lu : {1.5, 5.0, 14.0}) {
        const double exact = log_std_normal_sf(lu / std::sqrt(2.0));
        CHECK(product_tail_quadrature_at_log(p, lu).log_value == doctest::Approx(exact).epsilon(1e-8));
    }
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(max_tail_quadrature(0, 0.5, 10.0), DomainError);
    CHECK_THROWS_AS(max_tail_quadrature(2, 1.0, 10.0), DomainError);
    CHECK_THROWS_AS(bivariate_joint_tail(1.0, 2.0, 2.0), DomainError);
    CHECK_THROWS_AS(bivariate_joint_tail(0.5, 0.0, 2.0), DomainError);
    CHECK_THROWS_AS(exact_sum2_quadrature(1e-13), DomainError);
}
