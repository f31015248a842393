#pragma once

#include <stdexcept>
#include <string>

namespace qsdc {

/// Operation called on a state that does not satisfy its precondition
/// (missing subsystem, ancilla still attached, bad normalization).
class StateError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A postcondition the simulator guarantees did not hold. Always a bug.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Invalid experiment configuration. `field()` names the offending key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

} // namespace qsdc
