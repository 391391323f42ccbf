#pragma once

#include <stdexcept>
#include <string>

namespace rcf {

// Argument outside the mathematical domain of an operation (k = 0, t = 0, x not in (0,1), ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Not enough digits available for the requested length or truncation depth.
class LengthError : public std::length_error {
public:
    using std::length_error::length_error;
};

// Invalid or inconsistent configuration (malformed spec, missing psi profile, mismatched delta).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A Monte Carlo or finite-precision quantity could not be resolved within its error budget.
class PrecisionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Too few usable samples or grid points for an estimator.
class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace rcf
