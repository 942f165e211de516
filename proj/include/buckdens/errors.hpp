#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace buckdens {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An unsigned 64-bit result (or a 64-bit rational) would not fit.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// Arguments violate an operation's precondition (non-prime p, n = 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Exact residue counting was requested for a set without residue structure.
/// Callers are expected to fall back to windowed counting.
class UnsupportedStructure : public Error {
public:
    using Error::Error;
};

/// A period or modulus exceeds the configured bit-vector limit.
class PeriodLimitError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position, std::string token)
        : Error(what + " at position " + std::to_string(position) +
                (token.empty() ? std::string(" (end of input)") : " near '" + token + "'")),
          position_(position), token_(std::move(token)) {}

    std::size_t position() const noexcept { return position_; }
    const std::string& token() const noexcept { return token_; }

private:
    std::size_t position_;
    std::string token_;
};

} // namespace buckdens
