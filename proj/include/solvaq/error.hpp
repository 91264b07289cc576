#pragma once

#include <stdexcept>
#include <string>

namespace solvaq {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (geometry, basis, FCIDUMP, samples, config).
/// Carries the 1-based line number when one is known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Invalid or inconsistent configuration, missing files.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A desk-scale size guard was exceeded.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Violated numerical precondition (negative Boys argument, unnormalized vector, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Factorization or iterative solver breakdown.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace solvaq
