#pragma once

#include <stdexcept>
#include <string>

namespace jcipa {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameter or argument outside the domain of a formula.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Evaluation requested outside a sampled grid.
class OutOfRangeError : public Error {
public:
    using Error::Error;
};

/// The ODE integrator could not make progress.
class IntegrationError : public Error {
public:
    IntegrationError(const std::string& what, double time)
        : Error(what), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

/// Malformed or out-of-bounds scenario configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace jcipa
