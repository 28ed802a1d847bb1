#pragma once

namespace tailkit {

/// Parametric regularly varying function L(u) = C * u^beta * (log u)^alpha,
/// defined for u > 1. Index of regular variation is beta; beta = 0 gives a
/// slowly varying L. C = 1, beta = alpha = 0 is the plain log-normal case.
struct RegVaryingSpec {
    double scale = 1.0;         // C > 0
    double index = 0.0;         // beta
    double log_exponent = 0.0;  // alpha

    static RegVaryingSpec identity() { return {}; }

    bool is_identity() const { return scale == 1.0 && index == 0.0 && log_exponent == 0.0; }
    bool is_constant() const { return index == 0.0 && log_exponent == 0.0; }

    // Throws DomainError unless C > 0 and all fields are finite.
    void validate() const;
};

/// L(u). Throws DomainError for u <= 1.
double rv_eval(const RegVaryingSpec& L, double u);

/// ln L(u) given ln u > 0; usable when u itself would overflow.
double log_rv_eval_at_log(const RegVaryingSpec& L, double log_u);

}  // namespace tailkit
