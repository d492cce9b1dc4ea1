#pragma once

#include <stdexcept>
#include <string>

namespace nmeur {

// Base of every error raised by the library. The CLI maps the three
// families below onto distinct exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or out-of-range configuration. `field()` is a dotted path
// such as "reservoir.gamma" (empty when the whole document is at fault).
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what)
        : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// Anything that goes wrong while computing: invalid states, poles,
// degenerate post-selection, integrator failure, domain violations.
class ComputationError : public Error {
public:
    using Error::Error;
};

class InvalidState : public ComputationError {
public:
    using ComputationError::ComputationError;
};

class DomainError : public ComputationError {
public:
    using ComputationError::ComputationError;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace nmeur
