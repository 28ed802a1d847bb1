#pragma once

#include "tailkit/probability.hpp"

namespace tailkit {

inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // ln(sqrt(2*pi))

/// Standard normal density phi(t).
double std_normal_pdf(double t);
double log_std_normal_pdf(double t);

/// Standard normal CDF Phi(t).
double std_normal_cdf(double t);

/// Standard normal survival Psi(t) = P(W > t). The returned log_value stays
/// accurate where the linear value underflows (t up to several hundred).
/// Throws DomainError for non-finite t.
Probability std_normal_sf(double t);

/// ln Psi(t). Uses erfc where it is accurate and a continued fraction for the
/// Mills ratio in the far tail.
double log_std_normal_sf(double t);

/// ln Phi(t) = ln Psi(-t).
inline double log_std_normal_cdf(double t) { return log_std_normal_sf(-t); }

/// Hazard phi(t)/Psi(t), stable for large t.
double std_normal_hazard(double t);

/// Phi^{-1}(p) for p in (0,1).
double std_normal_quantile(double p);

/// Psi^{-1}(q) for q in (0,1); accurate for q far below machine epsilon.
double std_normal_sf_quantile(double q);

}  // namespace tailkit
