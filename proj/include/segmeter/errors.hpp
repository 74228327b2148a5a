#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace segmeter {

// Base for every error this library raises. The CLI maps subclasses onto
// stable exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (n < 2, tail
// outside (0,1), ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Bad user configuration: flags, config files, probe templates.
class ConfigError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

    // Same error with `context` (usually a file name) prefixed.
    ParseError in_context(const std::string& context) const {
        return ParseError(context + ": " + what(), line_, Prefixed{});
    }

private:
    struct Prefixed {};
    ParseError(const std::string& full, std::size_t line, Prefixed) : Error(full), line_(line) {}

    std::size_t line_;
};

// Target density cannot be produced by the requested model parameters.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

// A probe backend could not deliver a verdict (unavailable, crashed, ...).
class ProbeError : public Error {
public:
    using Error::Error;
};

}  // namespace segmeter
