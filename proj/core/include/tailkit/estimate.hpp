#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace tailkit {

enum class Method { crude, conditional_ak, quadrature };

inline std::string to_string(Method m) {
    switch (m) {
        case Method::crude: return "crude";
        case Method::conditional_ak: return "conditional-ak";
        case Method::quadrature: return "quadrature";
    }
    return "unknown";
}

/// A probability estimate. For Monte Carlo std_error is the sample standard
/// deviation over sqrt(n_samples); quadrature results have std_error 0 and
/// n_samples 1. log_value is kept for quadrature results that underflow.
struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t n_samples = 1;
    Method method = Method::crude;
    std::uint64_t seed = 0;
    double log_value = -std::numeric_limits<double>::infinity();

    double relative_error() const { return value > 0.0 ? std_error / value : INFINITY; }
};

}  // namespace tailkit
