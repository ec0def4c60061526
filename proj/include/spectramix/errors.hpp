#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spectramix {

// Input outside the domain of an operation (out-of-range channel, nonpositive
// reflectance, malformed weights, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A table, matrix or illuminant that cannot be used (singular, zero
// normalization, rank deficient).
class DegenerateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Text input that does not follow the documented format. Line numbers are
// 1-based; 0 means "not tied to a line".
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t line)
        : std::runtime_error(line == 0 ? message : "line " + std::to_string(line) + ": " + message),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace spectramix
