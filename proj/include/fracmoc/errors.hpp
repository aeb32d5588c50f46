#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracmoc {

// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operator (x < 0, h <= 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Gamma function evaluated at a pole.
class PoleError : public Error {
public:
    using Error::Error;
};

// Expression evaluation failure; `node` is the printed offending sub-expression.
class EvalError : public Error {
public:
    EvalError(const std::string& what, std::string node)
        : Error(what + " in '" + node + "'"), node_(std::move(node)) {}
    const std::string& node() const noexcept { return node_; }

private:
    std::string node_;
};

// Syntax error with a character offset into the source text.
class ParseError : public Error {
public:
    ParseError(std::size_t position, std::string message, std::string expected)
        : Error("parse error at offset " + std::to_string(position) + ": " + message +
                (expected.empty() ? std::string() : " (expected " + expected + ")")),
          position_(position),
          message_(std::move(message)),
          expected_(std::move(expected)) {}

    std::size_t position() const noexcept { return position_; }
    const std::string& message() const noexcept { return message_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    std::size_t position_;
    std::string message_;
    std::string expected_;
};

// An expression or problem does not fit the pattern an operation requires.
class PatternError : public Error {
public:
    using Error::Error;
};

// Characteristic tracing failures.
class TraceError : public Error {
public:
    using Error::Error;
};

}  // namespace fracmoc
