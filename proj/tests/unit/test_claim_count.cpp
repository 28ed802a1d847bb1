#include "doctest.h"

#include "tailkit/claim_count.hpp"
#include "tailkit/errors.hpp"

#include <cmath>

using namespace tailkit;

TEST_CASE("moment condition per family") {
    CHECK(check_moment_condition(ClaimCountSpec::fixed(3, 1.0)).value == 8.0);
    const MomentCheck g = check_moment_condition(ClaimCountSpec::geometric(0.5, 0.5));
    REQUIRE(g.finite);
    CHECK(g.value == doctest::Approx(2.0).epsilon(1e-15));
    // partial-sum oracle for the geometric series
    double partial = 0.0;
    for (int n = 0; n < 10000; ++n) partial += 0.5 * std::pow(0.75, n);
    CHECK(g.value == doctest::Approx(partial).epsilon(1e-12));

    const MomentCheck bad = check_moment_condition(ClaimCountSpec::geometric(0.2, 0.5));
    CHECK_FALSE(bad.finite);
    CHECK(bad.violated.find("(1+delta)(1-p) >= 1") != std::string::npos);

    CHECK(check_moment_condition(ClaimCountSpec::poisson(2.0, 0.25)).value == doctest::Approx(std::exp(0.5)));
    CHECK(check_moment_condition(ClaimCountSpec::truncated({0.25, 0.75}, 1.0)).value == doctest::Approx(1.75));
}

TEST_CASE("fixed N is admissible for every delta") {
    for (double d : {1e-6, 0.1, 1.0, 50.0}) CHECK(check_moment_condition(ClaimCountSpec::fixed(7, d)).finite);
}

TEST_CASE("require_moment_condition names the violated condition") {
    try {
        require_moment_condition(ClaimCountSpec::geometric(0.2, 0.5));
        FAIL("expected ConditionError");
    } catch (const ConditionError& e) {
        CHECK(e.condition() == "conN");
        CHECK(std::string(e.what()).find("(1+delta)(1-p) >= 1") != std::string::npos);
    }
}

TEST_CASE("mean_n") {
    CHECK(mean_n(ClaimCountSpec::fixed(2)) == 2.0);
    CHECK(mean_n(ClaimCountSpec::poisson(3.0, 1.0)) == 3.0);
    CHECK(mean_n(ClaimCountSpec::geometric(0.5, 0.5)) == 1.0);
    double partial = 0.0;
    const auto g = ClaimCountSpec::geometric(0.5, 0.5);
    for (std::uint64_t n = 0; n < 200; ++n) partial += static_cast<double>(n) * g.pmf(n);
    CHECK(partial == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("validation") {
    CHECK_THROWS_AS(ClaimCountSpec::truncated({0.5, 0.4}, 1.0).validate(), DomainError);
    CHECK_THROWS_AS(ClaimCountSpec::geometric(0.0, 1.0).validate(), DomainError);
    CHECK_THROWS_AS(ClaimCountSpec::fixed(1, 0.0).validate(), DomainError);
    CHECK_THROWS_AS(ClaimCountSpec::poisson(-1.0, 1.0).validate(), DomainError);
}

TEST_CASE("sample_n degenerate laws") {
    Rng rng(11);
    for (int k = 0; k < 100; ++k) {
        CHECK(sample_n(ClaimCountSpec::fixed(5), rng) == 5);
        CHECK(sample_n(ClaimCountSpec::truncated({0.0, 1.0}, 1.0), rng) == 1);
    }
}

TEST_CASE("sample_n matches the law") {
    Rng rng(2024);
    const auto g = ClaimCountSpec::geometric(0.5, 0.5);
    constexpr int kDraws = 1'000'000;
    int zeros = 0;
    double sum = 0.0, sum2 = 0.0;
    for (int k = 0; k < kDraws; ++k) {
        const auto n = static_cast<double>(sample_n(g, rng));
        zeros += n == 0.0;
        sum += n;
        sum2 += n * n;
    }
    CHECK(std::abs(zeros / double(kDraws) - 0.5) < 0.002);
    const double mean = sum / kDraws;
    const double se = std::sqrt((sum2 / kDraws - mean * mean) / kDraws);
    CHECK(std::abs(mean - 1.0) < 4.0 * se);

    const auto p = ClaimCountSpec::poisson(3.0, 1.0);
    sum = sum2 = 0.0;
    for (int k = 0; k < kDraws; ++k) {
        const auto n = static_cast<double>(sample_n(p, rng));
        sum += n;
        sum2 += n * n;
    }
    const double pm = sum / kDraws;
    CHECK(std::abs(pm - 3.0) < 4.0 * std::sqrt(3.0 / kDraws));
    CHECK((sum2 / kDraws - pm * pm) == doctest::Approx(3.0).epsilon(0.02));
}
