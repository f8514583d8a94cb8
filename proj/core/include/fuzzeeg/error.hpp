#pragma once

#include <stdexcept>
#include <string>

namespace fuzzeeg {

// Every error thrown by the library derives from Error, so callers (the CLI in
// particular) can map the whole family to an exit code with one catch.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input files (bad numeric token, ragged CSV row, ...).
class FormatError : public Error {
 public:
  FormatError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

// Out-of-domain parameters: TQWT Q/r/J, entropy m/tau/alpha, optimizer bounds.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Inconsistent run configuration (unknown case, missing class tag, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Dimension mismatches between matrices, parameter vectors and models.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Sub-band sets that do not match the transform parameters they claim.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Series too short for the requested embedding.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// Training diverged (non-finite loss).
class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace fuzzeeg
