#pragma once

#include <stdexcept>
#include <string>

namespace rulls {

/// Bad parameter values (exit code 1 at the CLI).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Unreadable or malformed input data (exit code 2 at the CLI).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical degeneracy, e.g. a zero-variance neighborhood (exit code 3 at the CLI).
class DegeneracyError : public std::runtime_error {
public:
    explicit DegeneracyError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace rulls
