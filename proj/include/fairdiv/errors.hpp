#pragma once

#include <stdexcept>
#include <string>

namespace fairdiv {

// Malformed or semantically invalid input documents (bad JSON, negative
// values, densities that do not integrate to one, ...).
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid operation parameters (wrong agent count for a mechanism, unsupported
// welfare exponent, non-ordinal mechanism where an ordinal one is required).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// An enumeration or search exceeded its configured budget.  Callers that can
// produce partial output catch this and report what they have.
struct CapExceeded : std::runtime_error {
    explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fairdiv
