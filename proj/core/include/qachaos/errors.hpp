#pragma once

#include <stdexcept>
#include <string>

namespace qachaos {

// Input violates a documented precondition (range, sortedness, shape).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operand shapes do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Requested system size exceeds what a dense representation supports.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Operator or model does not respect the reflection symmetry it is used with.
class SymmetryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Every candidate spacing ratio was rejected as degenerate.
class EmptyStatisticsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// LAPACK reported a failure (info != 0).
class EigenSolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Experiment configuration rejected; `path` names the offending field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::invalid_argument(path + ": " + message), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace qachaos
