#pragma once

#include <stdexcept>
#include <string>

namespace okun {

/// Malformed or out-of-range input data (bad CSV cell, invariant violation).
/// CLI maps this to exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Structurally valid data that is too small or too degenerate to fit
/// (short series, zero variance). CLI maps this to exit code 3.
class InfeasibleError : public std::runtime_error {
public:
    explicit InfeasibleError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad flags, unknown presets, conflicting options. CLI maps this to exit code 1.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace okun
