#include "tailkit/quadrature.hpp"

#include "tailkit/errors.hpp"
#include "tailkit/normal.hpp"
#include "tailkit/perturbed.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace tailkit {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInf = std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::abs(a - b)));
}

Estimate quadrature_estimate(double log_value) {
    Estimate e;
    e.method = Method::quadrature;
    e.n_samples = 1;
    e.std_error = 0.0;
    e.log_value = log_value;
    const double v = std::exp(log_value);
    e.value = std::isfinite(v) ? v : 0.0;
    return e;
}

// Locate a maximiser of log_f near the hints: coarse scan, then Brent.
double locate_peak(const std::function<double(double)>& log_f, double lo, double hi,
                   const std::vector<double>& hints, double& peak_value) {
    std::vector<double> probes;
    auto add = [&](double x) {
        if (x >= lo && x <= hi && std::isfinite(x)) probes.push_back(x);
    };
    for (double h : hints)
        for (double d : {-16.0, -8.0, -4.0, -2.0, -1.0, -0.5, -0.25, 0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0})
            add(h + d);
    add(lo);
    add(hi);
    // geometric probes away from the finite ends, or around 0 on the real line
    for (int k = -2; k <= 12; ++k) {
        const double d = std::ldexp(1.0, k);
        if (std::isfinite(lo)) add(lo + d);
        if (std::isfinite(hi)) add(hi - d);
        if (!std::isfinite(lo) && !std::isfinite(hi)) {
            add(d);
            add(-d);
        }
    }
    if (probes.empty()) probes.push_back(std::isfinite(lo) ? lo : (std::isfinite(hi) ? hi : 0.0));
    std::sort(probes.begin(), probes.end());
    probes.erase(std::unique(probes.begin(), probes.end()), probes.end());

    std::size_t best = 0;
    double best_v = kNegInf;
    for (std::size_t k = 0; k < probes.size(); ++k) {
        const double v = log_f(probes[k]);
        if (v > best_v) {
            best_v = v;
            best = k;
        }
    }
    double x = probes[best];
    if (probes.size() >= 3 && best_v > kNegInf) {
        const double a = best > 0 ? probes[best - 1] : probes[best];
        const double b = best + 1 < probes.size() ? probes[best + 1] : probes[best];
        if (b > a) {
            const auto r = boost::math::tools::brent_find_minima([&](double z) { return -log_f(z); }, a, b, 40);
            if (-r.second > best_v) {
                x = r.first;
                best_v = -r.second;
            }
        }
    }
    peak_value = best_v;
    return x;
}

}  // namespace

LogIntegral log_integrate(const std::function<double(double)>& log_f, double lo, double hi,
                          const std::vector<double>& hints, const QuadOptions& opts) {
    if (!(hi > lo)) return LogIntegral{kNegInf, 0.0};
    double peak_log = kNegInf;
    const double peak = locate_peak(log_f, lo, hi, hints, peak_log);
    if (peak_log == kNegInf) return LogIntegral{kNegInf, 0.0};

    std::vector<double> breaks{lo, hi};
    auto add = [&](double x) {
        if (x > lo && x < hi && std::isfinite(x)) breaks.push_back(x);
    };
    for (double d : {-8.0, -3.0, -1.0, -0.25, 0.0, 0.25, 1.0, 3.0, 8.0}) add(peak + d);
    for (double h : hints) add(h);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    bool peak_missed = false;
    auto scaled = [&](double x) {
        const double v = log_f(x);
        if (v == kNegInf) return 0.0;
        if (v - peak_log > 600.0) peak_missed = true;
        return std::exp(std::min(v - peak_log, 600.0));
    };
    double total = 0.0;
    double total_err = 0.0;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        double err = 0.0;
        const double part = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            scaled, breaks[k], breaks[k + 1], opts.max_depth, opts.rel_tol * 0.1, &err);
        total += part;
        total_err += err;
    }
    if (peak_missed) throw QuadratureError("quadrature could not locate the integrand's peak", kNegInf, INFINITY);
    if (!(total > 0.0)) return LogIntegral{kNegInf, 0.0};
    LogIntegral out{peak_log + std::log(total), total_err / total};
    if (!(out.rel_error <= opts.rel_tol)) {
        std::ostringstream os;
        os << "quadrature did not reach relative tolerance " << opts.rel_tol << " (achieved " << out.rel_error
           << ")";
        throw QuadratureError(os.str(), out.log_value, out.rel_error);
    }
    return out;
}

Estimate exact_sum2_quadrature_at_log(double log_u, const QuadOptions& opts, Sum2Form form) {
    if (!(log_u > std::log(2e-12)) || !std::isfinite(log_u))
        throw DomainError("exact_sum2_quadrature requires u > 2e-12");
    // ln Psi(log(u - e^x)) + ln phi(x), with log(u - e^x) = log u + log1p(-e^{x - log u})
    auto log_f = [log_u](double x) {
        const double d = x - log_u;
        if (d >= 0.0) return log_std_normal_pdf(x);
        return log_std_normal_sf(log_u + std::log1p(-std::exp(d))) + log_std_normal_pdf(x);
    };
    const double half = log_u - std::log(2.0);
    if (form == Sum2Form::split) {
        const LogIntegral I = log_integrate(log_f, kNegInf, half, {0.0, half, half - 1.0}, opts);
        return quadrature_estimate(log_add(std::log(2.0) + I.log_value, 2.0 * log_std_normal_sf(half)));
    }
    // int_0^u Psi(log(u-y)) f(y) dy: y < u/2 directly, y > u/2 through w = u - y = e^s
    auto log_g = [log_u](double s) {
        const double log_y = log_u + std::log1p(-std::exp(s - log_u));
        return log_std_normal_sf(s) + log_std_normal_pdf(log_y) - log_y + s;
    };
    const LogIntegral lower = log_integrate(log_f, kNegInf, half, {0.0, half, half - 1.0}, opts);
    const LogIntegral upper = log_integrate(log_g, kNegInf, half, {0.0, half, half - 1.0}, opts);
    return quadrature_estimate(log_add(log_add(lower.log_value, upper.log_value), log_std_normal_sf(log_u)));
}

Estimate exact_sum2_quadrature(double u, const QuadOptions& opts, Sum2Form form) {
    if (!(u > 2e-12)) throw DomainError("exact_sum2_quadrature requires u > 2e-12");
    return exact_sum2_quadrature_at_log(std::log(u), opts, form);
}

Estimate max_tail_quadrature_at_log(std::uint64_t n, double rho, double log_u, const QuadOptions& opts) {
    if (n < 1) throw DomainError("max_tail_quadrature requires n >= 1");
    if (!(rho >= 0.0 && rho < 1.0)) throw DomainError("max_tail_quadrature requires rho in [0,1)");
    if (!std::isfinite(log_u)) throw DomainError("max_tail_quadrature requires finite u > 0");
    const double s = std::sqrt(1.0 - rho * rho);
    const double nd = static_cast<double>(n);
    // ln(1 - Phi(a)^n) = ln(-expm1(n ln Phi(a)))
    auto log_complement = [nd](double a) {
        const double log_sf = log_std_normal_sf(a);
        if (log_sf < -700.0) return std::log(nd) + log_sf;
        const double log_cdf = log_std_normal_cdf(a);
        return std::log(-std::expm1(nd * log_cdf));
    };
    auto log_f = [&](double z) { return log_complement((log_u - rho * z) / s) + log_std_normal_pdf(z); };
    std::vector<double> hints{0.0, rho * log_u};
    if (rho > 0.0) hints.push_back(log_u / rho);
    const LogIntegral I = log_integrate(log_f, kNegInf, kInf, hints, opts);
    return quadrature_estimate(I.log_value);
}

Estimate max_tail_quadrature(std::uint64_t n, double rho, double u, const QuadOptions& opts) {
    if (!(u > 0.0)) throw DomainError("max_tail_quadrature requires u > 0");
    return max_tail_quadrature_at_log(n, rho, std::log(u), opts);
}

Estimate bivariate_joint_tail_at_log(double r, double log_a, double log_b, QuadOptions opts) {
    if (!(r > -1.0 && r < 1.0)) throw DomainError("bivariate_joint_tail requires r in (-1,1)");
    if (!std::isfinite(log_a) || !std::isfinite(log_b))
        throw DomainError("bivariate_joint_tail requires finite a, b > 0");
    const double s = std::sqrt(1.0 - r * r);
    auto log_f = [&](double x) { return log_std_normal_sf((log_b - r * x) / s) + log_std_normal_pdf(x); };
    std::vector<double> hints{log_a, log_a + s, std::max(log_a, log_b)};
    if (r != 0.0) hints.push_back(log_b / r);
    const LogIntegral I = log_integrate(log_f, log_a, kInf, hints, opts);
    return quadrature_estimate(I.log_value);
}

Estimate bivariate_joint_tail(double r, double a, double b, const QuadOptions& opts) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("bivariate_joint_tail requires a, b > 0");
    QuadOptions o = opts;
    o.rel_tol = std::min(o.rel_tol, 1e-8);
    return bivariate_joint_tail_at_log(r, std::log(a), std::log(b), o);
}

Estimate product_tail_quadrature_at_log(const ProductTailParams& p, double log_u, const QuadOptions& opts) {
    p.validate();
    if (!std::isfinite(log_u)) throw DomainError("product_tail_quadrature requires finite u > 0");
    const PerturbedTailSpec first(p.L1);
    const PerturbedTailSpec second(p.L2);
    auto log_f = [&](double z) {
        return first.log_density_at_log(z) + second.log_survival_at_log((log_u - p.sigma1 * z) / p.sigma2);
    };
    const std::vector<double> hints{0.0, p.gamma() * log_u / p.sigma1, first.log_splice(),
                                    (log_u - p.sigma2 * second.log_splice()) / p.sigma1};
    const LogIntegral I = log_integrate(log_f, kNegInf, kInf, hints, opts);
    return quadrature_estimate(I.log_value);
}

}  // namespace tailkit
