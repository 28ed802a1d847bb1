#pragma once

#include <cmath>
#include <limits>

namespace tailkit {

// A probability kept both as a linear value and as a natural log. The log
// is authoritative; the linear value is reconstructed only when it is above
// kLinearFloor and is 0 otherwise.
struct Probability {
    static constexpr double kLinearFloor = 1e-300;

    double value = 0.0;
    double log_value = -std::numeric_limits<double>::infinity();

    static Probability from_log(double log_p) {
        Probability p;
        p.log_value = log_p;
        const double lin = std::exp(log_p);
        p.value = lin >= kLinearFloor ? lin : 0.0;
        return p;
    }

    static Probability from_value(double v) {
        Probability p;
        p.value = v;
        p.log_value = v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity();
        return p;
    }

    static Probability zero() { return Probability{}; }

    bool is_zero() const { return std::isinf(log_value) && log_value < 0.0; }
};

}  // namespace tailkit
