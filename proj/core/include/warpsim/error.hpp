#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace warpsim {

// Base of every error the library raises. Callers that only need a message
// can catch this; the CLI maps it to a nonzero exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Kernel text could not be parsed. Line and column are 1-based.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what);

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

// A program parsed but is structurally unusable (bad CFG, several exits, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

// A configuration value violates a machine or launch invariant.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what);

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// Runtime fault raised by either the reference interpreter or the timing
// simulator: out-of-bounds access, barrier under divergence, budget exhausted.
class ExecutionFault : public Error {
public:
    using Error::Error;
};

// Timing simulation diverged from the sequential oracle.
class CorrectnessError : public Error {
public:
    using Error::Error;
};

} // namespace warpsim
