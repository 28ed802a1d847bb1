#include "tailkit/claim_count.hpp"

#include "tailkit/errors.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace tailkit {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

}  // namespace

ClaimCountSpec ClaimCountSpec::fixed(std::uint64_t n, double delta) {
    return ClaimCountSpec{FixedCount{n}, delta};
}

ClaimCountSpec ClaimCountSpec::geometric(double p, double delta) {
    return ClaimCountSpec{GeometricCount{p}, delta};
}

ClaimCountSpec ClaimCountSpec::poisson(double lambda, double delta) {
    return ClaimCountSpec{PoissonCount{lambda}, delta};
}

ClaimCountSpec ClaimCountSpec::truncated(std::vector<double> probs, double delta) {
    return ClaimCountSpec{TruncatedCount{std::move(probs)}, delta};
}

void ClaimCountSpec::validate() const {
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw DomainError("claim count: declared delta must be finite and > 0");
    std::visit(overloaded{
                   [](const FixedCount&) {},
                   [](const GeometricCount& g) {
                       if (!(g.p > 0.0 && g.p <= 1.0))
                           throw DomainError("claim count: geometric p must lie in (0,1]");
                   },
                   [](const PoissonCount& q) {
                       if (!(q.lambda > 0.0) || !std::isfinite(q.lambda))
                           throw DomainError("claim count: poisson lambda must be finite and > 0");
                   },
                   [](const TruncatedCount& t) {
                       if (t.probs.empty()) throw DomainError("claim count: truncated law needs probabilities");
                       for (double p : t.probs)
                           if (!(p >= 0.0 && p <= 1.0))
                               throw DomainError("claim count: truncated probabilities must lie in [0,1]");
                       const double total = std::accumulate(t.probs.begin(), t.probs.end(), 0.0);
                       if (std::abs(total - 1.0) > 1e-12)
                           throw DomainError("claim count: truncated probabilities sum to " + fmt(total) +
                                             ", expected 1");
                   },
               },
               law);
}

double ClaimCountSpec::pmf(std::uint64_t n) const {
    return std::visit(overloaded{
                          [n](const FixedCount& f) { return n == f.n ? 1.0 : 0.0; },
                          [n](const GeometricCount& g) {
                              return g.p == 1.0 ? (n == 0 ? 1.0 : 0.0)
                                                : g.p * std::exp(static_cast<double>(n) * std::log1p(-g.p));
                          },
                          [n](const PoissonCount& q) {
                              const double k = static_cast<double>(n);
                              return std::exp(k * std::log(q.lambda) - q.lambda - std::lgamma(k + 1.0));
                          },
                          [n](const TruncatedCount& t) { return n < t.probs.size() ? t.probs[n] : 0.0; },
                      },
                      law);
}

std::optional<std::uint64_t> ClaimCountSpec::max_support() const {
    return std::visit(overloaded{
                          [](const FixedCount& f) -> std::optional<std::uint64_t> { return f.n; },
                          [](const GeometricCount& g) -> std::optional<std::uint64_t> {
                              if (g.p == 1.0) return 0;
                              return std::nullopt;
                          },
                          [](const PoissonCount&) -> std::optional<std::uint64_t> { return std::nullopt; },
                          [](const TruncatedCount& t) -> std::optional<std::uint64_t> {
                              for (std::size_t i = t.probs.size(); i-- > 0;)
                                  if (t.probs[i] > 0.0) return i;
                              return 0;
                          },
                      },
                      law);
}

std::string ClaimCountSpec::family_name() const {
    return std::visit(overloaded{
                          [](const FixedCount&) { return std::string("fixed"); },
                          [](const GeometricCount&) { return std::string("geometric"); },
                          [](const PoissonCount&) { return std::string("poisson"); },
                          [](const TruncatedCount&) { return std::string("truncated"); },
                      },
                      law);
}

MomentCheck check_moment_condition(const ClaimCountSpec& s) {
    s.validate();
    const double base = 1.0 + s.delta;
    return std::visit(
        overloaded{
            [&](const FixedCount& f) {
                return MomentCheck{true, std::pow(base, static_cast<double>(f.n)), {}};
            },
            [&](const GeometricCount& g) {
                const double ratio = base * (1.0 - g.p);
                if (ratio >= 1.0)
                    return MomentCheck{false, INFINITY,
                                       "(1+delta)(1-p) >= 1: (1+" + fmt(s.delta) + ")(1-" + fmt(g.p) +
                                           ") = " + fmt(ratio)};
                return MomentCheck{true, g.p / (1.0 - ratio), {}};
            },
            [&](const PoissonCount& q) { return MomentCheck{true, std::exp(q.lambda * s.delta), {}}; },
            [&](const TruncatedCount& t) {
                double acc = 0.0;
                double w = 1.0;
                for (double p : t.probs) {
                    acc += p * w;
                    w *= base;
                }
                return MomentCheck{true, acc, {}};
            },
        },
        s.law);
}

double require_moment_condition(const ClaimCountSpec& s) {
    const MomentCheck m = check_moment_condition(s);
    if (!m.finite) throw ConditionError("conN", "condition (conN) violated: " + m.violated);
    return m.value;
}

double mean_n(const ClaimCountSpec& s) {
    return std::visit(overloaded{
                          [](const FixedCount& f) { return static_cast<double>(f.n); },
                          [](const GeometricCount& g) { return (1.0 - g.p) / g.p; },
                          [](const PoissonCount& q) { return q.lambda; },
                          [](const TruncatedCount& t) {
                              double acc = 0.0;
                              for (std::size_t i = 0; i < t.probs.size(); ++i)
                                  acc += static_cast<double>(i) * t.probs[i];
                              return acc;
                          },
                      },
                      s.law);
}

std::uint64_t sample_n(const ClaimCountSpec& s, Rng& rng) {
    return std::visit(
        overloaded{
            [](const FixedCount& f) { return f.n; },
            [&](const GeometricCount& g) -> std::uint64_t {
                if (g.p == 1.0) return 0;
                // P(N >= k) = (1-p)^k
                return static_cast<std::uint64_t>(std::floor(std::log(rng.uniform()) / std::log1p(-g.p)));
            },
            [&](const PoissonCount& q) -> std::uint64_t {
                if (q.lambda > 500.0) {
                    std::poisson_distribution<std::uint64_t> d(q.lambda);
                    return d(rng.engine());
                }
                const double v = rng.uniform();
                double pk = std::exp(-q.lambda);
                double cdf = pk;
                std::uint64_t k = 0;
                while (v > cdf && pk > 0.0) {
                    ++k;
                    pk *= q.lambda / static_cast<double>(k);
                    cdf += pk;
                }
                return k;
            },
            [&](const TruncatedCount& t) -> std::uint64_t {
                const double v = rng.uniform();
                double cdf = 0.0;
                std::uint64_t last = 0;
                for (std::size_t i = 0; i < t.probs.size(); ++i) {
                    if (t.probs[i] <= 0.0) continue;
                    last = i;
                    cdf += t.probs[i];
                    if (v <= cdf) return i;
                }
                return last;
            },
        },
        s.law);
}

}  // namespace tailkit
