#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace auter {

/// Base for every error raised by the library. The CLI maps the concrete
/// subclasses onto its exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input or a violated structural invariant (exit code 1).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Positioned failure while reading an instance file (exit code 1).
class ParseError : public ValidationError {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& msg)
      : ValidationError("line " + std::to_string(line) + ", column " +
                        std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A comparison or choice that cannot be decided at the current horizon
/// (exit code 2).
class IndeterminateError : public Error {
 public:
  using Error::Error;
};

/// The caller asked for something whose preconditions do not hold, e.g. a
/// Whitehead move whose collapse edge is not in D(alpha) (exit code 3).
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// A checked mathematical property failed (exit code 4).
class PropertyViolation : public Error {
 public:
  using Error::Error;
};

/// A descent ran out of its step budget (exit code 4: termination failed).
class BudgetExhausted : public PropertyViolation {
 public:
  using PropertyViolation::PropertyViolation;
};

}  // namespace auter
