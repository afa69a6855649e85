#pragma once

#include <stdexcept>
#include <string>

namespace meshspectra {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (OBJ, JSON, CSV). Carries a 1-based line number
/// when one is known, 0 otherwise.
class ParseError : public Error {
public:
  ParseError(const std::string& message, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message
                       : message),
        line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

/// Structurally invalid data: out-of-range indices, degenerate faces,
/// non-manifold configurations where an operation forbids them.
class StructuralError : public Error {
public:
  using Error::Error;
};

/// Caller passed inconsistent sizes, invalid ranges, or bad options.
class ArgumentError : public Error {
public:
  using Error::Error;
};

/// A guarded resource limit (memory ceiling, subdivision level cap) was hit.
class ResourceError : public Error {
public:
  using Error::Error;
};

/// An iterative numerical method failed to converge. Carries the best
/// residual reached.
class NumericalError : public Error {
public:
  NumericalError(const std::string& message, double residual)
      : Error(message + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

private:
  double residual_ = 0.0;
};

/// Filesystem / stream failure.
class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace meshspectra
