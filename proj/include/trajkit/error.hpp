#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace trajkit {

// All library failures derive from Error so callers can map them to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input data violates a data-model invariant (non-finite value, bad dimension, empty trajectory).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A numeric parameter is out of its admissible range (psi > N, k >= n, sigma <= 0).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Inconsistent run configuration (search requested without labels, unknown option value).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A metric cannot be computed on the given labels.
class MetricError : public Error {
 public:
  using Error::Error;
};

// Malformed file content. `line()` is 1-based, 0 when not applicable.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace trajkit
