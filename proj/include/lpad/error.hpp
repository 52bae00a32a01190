#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lpad {

/// Base class for every error raised by the library. The CLI maps these to
/// exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed `.lpad` text, or a malformed choice expression / query string.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message)
        , line_(line)
        , column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// A well-formed program that violates a semantic requirement (probability
/// sums, predicate partition, range restriction, stratification, unknown
/// clause instances, ...).
class ProgramError : public Error {
public:
    using Error::Error;
};

/// An enumeration or search exceeded its configured bound.
class LimitError : public Error {
public:
    using Error::Error;
};

} // namespace lpad
