// errors.hpp: exception types shared by the dephasing library

#pragma once

#include <stdexcept>
#include <string>

namespace dephase {

/// Input violates a documented precondition (invalid state, negative frequency, ...).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Parameters are valid physically but outside the domain of the requested backend.
class UnsupportedParameter : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A ratio or propagator whose denominator is numerically zero.
class IllConditioned : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Adaptive quadrature exhausted its budget before reaching tolerance.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double estimate, double error_estimate)
        : std::runtime_error(what), estimate_(estimate), error_estimate_(error_estimate) {}

    double estimate() const noexcept { return estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double estimate_;
    double error_estimate_;
};

/// ODE integration could not make progress.
class IntegrationFailure : public std::runtime_error {
public:
    IntegrationFailure(const std::string& what, double time)
        : std::runtime_error(what), time_(time) {}

    /// Last time reached before the failure.
    double time() const noexcept { return time_; }

private:
    double time_;
};

} // namespace dephase
