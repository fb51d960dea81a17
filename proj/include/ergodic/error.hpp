#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ergodic {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset()` is the byte offset of the problem.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t offset)
        : Error(message + " at offset " + std::to_string(offset)), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// A sub-expression produced a non-finite value during evaluation.
class DomainError : public Error {
public:
    DomainError(const std::string& subexpression, double u, double x)
        : Error("non-finite value in '" + subexpression + "' at u=" + std::to_string(u) +
                ", x=" + std::to_string(x)),
          subexpression_(subexpression) {}

    const std::string& subexpression() const noexcept { return subexpression_; }

private:
    std::string subexpression_;
};

/// Invalid problem definition or configuration file.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A strategy does not match the grid or leaves the control set.
class StrategyError : public Error {
public:
    using Error::Error;
};

/// Numerical failure: truncation too tight, non-finite intermediate, etc.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace ergodic
