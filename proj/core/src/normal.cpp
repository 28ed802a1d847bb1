#include "tailkit/normal.hpp"

#include "tailkit/errors.hpp"

#include <boost/math/distributions/normal.hpp>

#include <cmath>

namespace tailkit {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Beyond this point erfc loses relative accuracy to gradual underflow and
// the Mills-ratio continued fraction has converged in a few dozen terms.
constexpr double kContinuedFractionFrom = 30.0;

// Psi(t)/phi(t) via the backward-evaluated continued fraction
// 1/(t+1/(t+2/(t+3/(t+...)))). Valid for t >= kContinuedFractionFrom.
double mills_ratio(double t) {
    constexpr int kTerms = 60;
    double f = t;
    for (int k = kTerms; k >= 1; --k) f = t + k / f;
    return 1.0 / f;
}

void require_finite(double t) {
    if (!std::isfinite(t)) throw DomainError("standard normal: argument must be finite");
}

const boost::math::normal& unit_normal() {
    static const boost::math::normal dist(0.0, 1.0);
    return dist;
}

}  // namespace

double std_normal_pdf(double t) { return std::exp(log_std_normal_pdf(t)); }

double log_std_normal_pdf(double t) { return -0.5 * t * t - kLogSqrt2Pi; }

double std_normal_cdf(double t) { return 0.5 * std::erfc(-t * kInvSqrt2); }

double log_std_normal_sf(double t) {
    require_finite(t);
    if (t >= kContinuedFractionFrom) return log_std_normal_pdf(t) + std::log(mills_ratio(t));
    if (t > -1.0) return std::log(0.5 * std::erfc(t * kInvSqrt2));
    // Psi(t) = 1 - Psi(-t); keep the small complement exact.
    if (-t >= kContinuedFractionFrom) return -std::exp(log_std_normal_sf(-t));
    return std::log1p(-0.5 * std::erfc(-t * kInvSqrt2));
}

Probability std_normal_sf(double t) {
    require_finite(t);
    Probability p;
    p.log_value = log_std_normal_sf(t);
    p.value = t < kContinuedFractionFrom ? 0.5 * std::erfc(t * kInvSqrt2) : std::exp(p.log_value);
    return p;
}

double std_normal_hazard(double t) {
    require_finite(t);
    if (t >= kContinuedFractionFrom) return 1.0 / mills_ratio(t);
    return std::exp(log_std_normal_pdf(t) - log_std_normal_sf(t));
}

double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("std_normal_quantile: p must lie in (0,1)");
    return boost::math::quantile(unit_normal(), p);
}

double std_normal_sf_quantile(double q) {
    if (!(q > 0.0 && q < 1.0)) throw DomainError("std_normal_sf_quantile: q must lie in (0,1)");
    return boost::math::quantile(boost::math::complement(unit_normal(), q));
}

}  // namespace tailkit
