#pragma once

#include <stdexcept>
#include <string>

namespace hdea {

/// Raised when an operation is called with arguments outside its domain.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised by exhaustive routines when the instance is too large to enumerate.
class RefusalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by file readers; carries the 1-based line number of the offending input.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace hdea
