#pragma once

#include <stdexcept>
#include <string>

namespace tailkit {

// Argument outside the domain of a formula (u <= e, non-finite t, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A modelling condition the caller asserted does not hold, e.g. an infinite
// E[(1+delta)^N]. `condition()` is the short condition name used in reports.
class ConditionError : public std::runtime_error {
public:
    ConditionError(std::string condition, const std::string& what)
        : std::runtime_error(what), condition_(std::move(condition)) {}

    const std::string& condition() const noexcept { return condition_; }

private:
    std::string condition_;
};

class FactorizationError : public std::runtime_error {
public:
    FactorizationError(std::size_t pivot, const std::string& what)
        : std::runtime_error(what), pivot_(pivot) {}

    std::size_t pivot() const noexcept { return pivot_; }

private:
    std::size_t pivot_;
};

// Adaptive quadrature did not reach its tolerance. Carries what it got.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double achieved_log_value, double achieved_rel_error)
        : std::runtime_error(what),
          log_value_(achieved_log_value),
          rel_error_(achieved_rel_error) {}

    double achieved_log_value() const noexcept { return log_value_; }
    double achieved_rel_error() const noexcept { return rel_error_; }

private:
    double log_value_;
    double rel_error_;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace tailkit
