#include "tailkit/perturbed.hpp"

#include "tailkit/errors.hpp"
#include "tailkit/normal.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

namespace tailkit {

namespace {

constexpr double kGridStep = 0.01;
constexpr double kSpliceStep = 0.05;
constexpr double kGridEnd = 60.0;
constexpr double kSpliceSearchEnd = 40.0;

// d/dt ln G(e^t) = beta + alpha/t - hazard(t)
double log_tail_slope(const RegVaryingSpec& L, double t) {
    return L.index + L.log_exponent / t - std_normal_hazard(t);
}

bool admissible_at(const RegVaryingSpec& L, double t) {
    const double log_g = std::log(L.scale) + L.index * t + L.log_exponent * std::log(t) + log_std_normal_sf(t);
    return log_g < 0.0 && log_tail_slope(L, t) < 0.0;
}

}  // namespace

PerturbedTailSpec::PerturbedTailSpec(RegVaryingSpec L) : L_(L) {
    L_.validate();
    if (L_.index >= 0.5 * kGridEnd)
        throw DomainError("perturbed tail: index beta too large for a log-normal type tail");
    // Admissibility on the grid, scanned from the far end so one pass gives
    // the smallest splice point with every later grid point admissible.
    const auto n = static_cast<std::size_t>((kGridEnd - 1.0) / kGridStep) + 1;
    double first_ok = kGridEnd;
    for (std::size_t k = n; k-- > 0;) {
        const double t = 1.0 + static_cast<double>(k) * kGridStep;
        if (!admissible_at(L_, t)) break;
        first_ok = t;
    }
    double splice = 1.0 + kSpliceStep;
    while (splice < first_ok - 1e-12) splice += kSpliceStep;
    if (splice > kSpliceSearchEnd) throw DomainError("perturbed tail: no admissible splice point below log u = 40");
    log_splice_ = splice;
    check_tail_from(log_splice_);
}

PerturbedTailSpec::PerturbedTailSpec(RegVaryingSpec L, double log_splice) : L_(L), log_splice_(log_splice) {
    L_.validate();
    if (!(log_splice > 1.0) || !std::isfinite(log_splice))
        throw DomainError("perturbed tail: splice point must exceed e");
    check_tail_from(log_splice_);
}

void PerturbedTailSpec::check_tail_from(double log_splice) {
    for (double t = log_splice; t <= kGridEnd; t += kGridStep) {
        if (!admissible_at(L_, t)) {
            std::ostringstream os;
            os << "perturbed tail: G(u) = L(u) Psi(log u) is not < 1 and decreasing at log u = " << t;
            throw DomainError(os.str());
        }
    }
    log_tail_at_splice_ = log_tail_formula(log_splice);
    log_body_mass_ = std::log1p(-std::exp(log_tail_at_splice_));
    log_cdf_at_splice_ = log_std_normal_cdf(log_splice);
}

double PerturbedTailSpec::splice_point() const { return std::exp(log_splice_); }

double PerturbedTailSpec::log_tail_formula(double t) const {
    return log_rv_eval_at_log(L_, t) + log_std_normal_sf(t);
}

double PerturbedTailSpec::log_survival_at_log(double t) const {
    if (is_lognormal()) return log_std_normal_sf(t);
    if (t >= log_splice_) return log_tail_formula(t);
    // 1 - (1-G*) Phi(t)/Phi(t*)
    return std::log1p(-std::exp(log_body_mass_ + log_std_normal_cdf(t) - log_cdf_at_splice_));
}

double PerturbedTailSpec::survival(double y) const {
    if (!(y > 0.0)) return 1.0;
    return std::exp(log_survival_at_log(std::log(y)));
}

double PerturbedTailSpec::log_density_at_log(double t) const {
    if (is_lognormal()) return log_std_normal_pdf(t);
    if (t >= log_splice_) return log_tail_formula(t) + std::log(-log_tail_slope(L_, t));
    return log_body_mass_ + log_std_normal_pdf(t) - log_cdf_at_splice_;
}

double PerturbedTailSpec::quantile_at_log(double v) const {
    if (!(v > 0.0 && v < 1.0)) throw DomainError("perturbed tail quantile: level must lie in (0,1)");
    if (is_lognormal()) return std_normal_sf_quantile(v);
    const double log_v = std::log(v);
    if (log_v > log_tail_at_splice_) {
        // body: Phi(t) = (1 - v) Phi(t*) / (1 - G*)
        const double log_p = std::log1p(-v) + log_cdf_at_splice_ - log_body_mass_;
        return std_normal_quantile(std::exp(log_p));
    }
    auto f = [&](double t) { return log_tail_formula(t) - log_v; };
    double lo = log_splice_;
    if (f(lo) <= 0.0) return lo;
    double step = 1.0;
    double hi = lo + step;
    while (f(hi) > 0.0) {
        lo = hi;
        step *= 2.0;
        hi = lo + step;
        if (hi > 1e4) throw std::runtime_error("perturbed tail quantile: root not bracketed");
    }
    std::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(36), iters);
    return 0.5 * (r.first + r.second);
}

double PerturbedTailSpec::sample_log(Rng& rng) const {
    if (is_lognormal()) return rng.normal();
    return quantile_at_log(rng.uniform());
}

double sample_perturbed(const PerturbedTailSpec& t, Rng& rng) { return std::exp(t.sample_log(rng)); }

}  // namespace tailkit
