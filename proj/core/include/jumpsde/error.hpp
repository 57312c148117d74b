// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace jumpsde {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset()` is the byte offset of the failure.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, const std::string& message)
        : Error("parse error at offset " + std::to_string(offset) + ": " + message), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Arithmetic outside the domain of an operation (1/0, ln(-1), ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A derivative was requested at a point where the expression is not smooth.
class NonSmoothError : public Error {
public:
    using Error::Error;
};

/// A precondition or structural invariant on an input value was violated.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Integration produced an infinite or NaN state.
class NonFiniteError : public Error {
public:
    using Error::Error;
};

}  // namespace jumpsde
