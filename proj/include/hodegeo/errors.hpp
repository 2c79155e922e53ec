#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hodegeo {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Syntax error in an expression string; `offset` is a byte position into the input.
struct ParseError : Error {
    std::size_t offset;
    ParseError(std::size_t off, const std::string& msg)
        : Error(msg + " (at byte " + std::to_string(off) + ")"), offset(off) {}
};

/// Unbound variable or parameter during evaluation.
struct EvalError : Error {
    using Error::Error;
};

/// Evaluation left the function's domain (log of a non-positive number, ...).
struct DomainError : EvalError {
    using EvalError::EvalError;
};

/// Malformed model data: arity mismatch, undeclared parameter, bad file contents.
struct ModelError : Error {
    using Error::Error;
};

/// Dimension or order mismatch between otherwise well-formed objects.
struct ShapeError : Error {
    using Error::Error;
};

/// Numerical integration failure: non-finite state, incompatible grids.
struct NumericError : Error {
    using Error::Error;
};

}  // namespace hodegeo
