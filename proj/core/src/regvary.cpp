#include "tailkit/regvary.hpp"

#include "tailkit/errors.hpp"

#include <cmath>

namespace tailkit {

void RegVaryingSpec::validate() const {
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw DomainError("regularly varying function: scale C must be finite and > 0");
    if (!std::isfinite(index) || !std::isfinite(log_exponent))
        throw DomainError("regularly varying function: beta and alpha must be finite");
}

double log_rv_eval_at_log(const RegVaryingSpec& L, double log_u) {
    if (!(log_u > 0.0)) throw DomainError("regularly varying function is defined for u > 1 only");
    double out = std::log(L.scale) + L.index * log_u;
    if (L.log_exponent != 0.0) out += L.log_exponent * std::log(log_u);
    return out;
}

double rv_eval(const RegVaryingSpec& L, double u) {
    if (!(u > 1.0)) throw DomainError("regularly varying function is defined for u > 1 only");
    return std::exp(log_rv_eval_at_log(L, std::log(u)));
}

}  // namespace tailkit
