#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kmpp {

/// Base of every error thrown by the library. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad user-supplied parameters (non-positive stdev, k > m, reps < 30, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Caller broke an operation's precondition (empty center set, shape mismatch).
class ContractError : public Error {
public:
    using Error::Error;
};

/// Requested more centers than there are distinct point locations.
class DegenerateInputError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Rendering requested for data that is not two-dimensional.
class UnsupportedDimensionError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Exhaustive oracle asked to handle an instance beyond its size limits.
class SizeLimitError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed input file. `line()` is 1-based.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

}  // namespace kmpp
