#pragma once

#include "tailkit/asym.hpp"
#include "tailkit/estimate.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace tailkit {

struct QuadOptions {
    double rel_tol = 1e-9;
    unsigned max_depth = 14;  // 61-point Gauss-Kronrod, at most ~1e6 nodes
};

struct LogIntegral {
    double log_value = 0.0;
    double rel_error = 0.0;
};

/// ln of the integral of exp(log_f) over [lo, hi] (either end may be
/// infinite). The integrand is rescaled by its located maximum before adaptive
/// Gauss-Kronrod integration, so results far below the double range are
/// fine. `hints` are points near which the integrand may peak or kink.
/// Throws QuadratureError when rel_tol is not reached.
LogIntegral log_integrate(const std::function<double(double)>& log_f, double lo, double hi,
                          const std::vector<double>& hints, const QuadOptions& opts = {});

enum class Sum2Form { split, full };

/// P(Y1 + Y2 > u) for iid LN(0,1):
///   split: 2 int_0^{u/2} Psi(log(u-y)) f(y) dy + Psi(log(u/2))^2
///   full:  int_0^u Psi(log(u-y)) f(y) dy + Psi(log u)
Estimate exact_sum2_quadrature(double u, const QuadOptions& opts = {}, Sum2Form form = Sum2Form::split);
Estimate exact_sum2_quadrature_at_log(double log_u, const QuadOptions& opts = {},
                                      Sum2Form form = Sum2Form::split);

/// P(max_i Y_i > u) for n claims of the standard-normal factor model with
/// loading rho: 1 - int Phi((log u - rho z)/sqrt(1-rho^2))^n phi(z) dz,
/// evaluated through the log of the complement.
Estimate max_tail_quadrature(std::uint64_t n, double rho, double u, const QuadOptions& opts = {});
Estimate max_tail_quadrature_at_log(std::uint64_t n, double rho, double log_u, const QuadOptions& opts = {});

/// P(Y_i > a, Y_j > b) for a bivariate log-normal with log-correlation r:
///   int_{log a}^inf Psi((log b - r x)/sqrt(1-r^2)) phi(x) dx.
Estimate bivariate_joint_tail(double r, double a, double b, const QuadOptions& opts = {});
Estimate bivariate_joint_tail_at_log(double r, double log_a, double log_b, QuadOptions opts = {.rel_tol = 1e-8});

/// P(e^{sigma1 Z1 + sigma2 Z2} > u) where e^{Zk} follows the perturbed-tail
/// law built from Lk; exact for the laws the samplers draw from.
Estimate product_tail_quadrature_at_log(const ProductTailParams& p, double log_u, const QuadOptions& opts = {});

}  // namespace tailkit
