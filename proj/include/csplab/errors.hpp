#pragma once

#include <stdexcept>
#include <string>

namespace csplab {

// Base for all library errors. Subclasses map onto CLI exit codes:
// config-shaped problems exit 1, capacity/budget problems exit 2.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input has the wrong shape (arity mismatch, length mismatch).
struct ShapeError : Error {
    using Error::Error;
};

// A numeric argument is outside its allowed range.
struct DomainError : Error {
    using Error::Error;
};

// The requested quantity is undefined (e.g. value of an empty instance).
struct UndefinedValueError : Error {
    using Error::Error;
};

// The request exceeds a configured resource cap (brute-force size etc).
struct CapacityError : Error {
    using Error::Error;
};

// Operation applied to an unsupported predicate family.
struct FamilyError : Error {
    using Error::Error;
};

// Malformed configuration, unknown ids, missing required options.
struct ConfigError : Error {
    using Error::Error;
};

// Malformed instance file.
struct ParseError : ConfigError {
    using ConfigError::ConfigError;
};

// A streaming state exceeded its declared bit budget.
struct BudgetError : Error {
    using Error::Error;
};

} // namespace csplab
