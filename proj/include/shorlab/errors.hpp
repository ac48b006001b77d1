#pragma once

#include <stdexcept>
#include <string>

namespace shorlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed circuit text. `line()` is 1-based; 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// An operation was called outside its domain (non-co-prime C, width over cap, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Iterative reconstruction hit its iteration cap.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what + " (final residual " + std::to_string(residual) + ")"), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// A compilation pass changed the circuit's behaviour on its declared scope.
class UnsoundPassError : public Error {
 public:
  using Error::Error;
};

}  // namespace shorlab
