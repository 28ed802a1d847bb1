#pragma once

#include "tailkit/regvary.hpp"
#include "tailkit/rng.hpp"

namespace tailkit {

/// Law of a positive Y whose survival is exactly G(u) = L(u) Psi(log u) above
/// the splice point u* and a rescaled LN(0,1) body below it:
///   P(Y > u) = 1 - (1 - G(u*)) Phi(log u) / Phi(log u*),  u < u*.
/// G must be < 1 and strictly decreasing on [u*, inf); this is checked on a
/// dense log-scale grid at construction. With L the identity the law is
/// exactly LN(0,1).
///
/// Everything is parameterised by t = log u so far tails never overflow.
class PerturbedTailSpec {
public:
    /// Smallest admissible splice point on a 0.05 log-grid above log u = 1.
    explicit PerturbedTailSpec(RegVaryingSpec L);

    /// Explicit splice point; throws DomainError unless log_splice > 1 and the
    /// monotonicity/bound checks pass from there on.
    PerturbedTailSpec(RegVaryingSpec L, double log_splice);

    const RegVaryingSpec& tail_function() const { return L_; }
    double log_splice() const { return log_splice_; }
    double splice_point() const;
    bool is_lognormal() const { return L_.is_identity(); }

    /// ln G(e^t) = ln L(e^t) + ln Psi(t), the tail formula itself (t > 0).
    double log_tail_formula(double t) const;

    /// ln P(Y > e^t)
    double log_survival_at_log(double t) const;
    double survival(double y) const;

    /// ln of the density of log Y at t.
    double log_density_at_log(double t) const;

    /// t with P(Y > e^t) = v, v in (0,1). Tail inversion is a bracketed
    /// root find on log scale to relative tolerance 1e-10.
    double quantile_at_log(double v) const;

    /// log Y by inverse transform.
    double sample_log(Rng& rng) const;

private:
    void check_tail_from(double log_splice);

    RegVaryingSpec L_;
    double log_splice_ = 1.05;
    double log_tail_at_splice_ = 0.0;  // ln G(u*)
    double log_body_mass_ = 0.0;       // ln(1 - G(u*))
    double log_cdf_at_splice_ = 0.0;   // ln Phi(log u*)
};

/// A positive draw Y = exp(sample_log).
double sample_perturbed(const PerturbedTailSpec& t, Rng& rng);

}  // namespace tailkit
