#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace romns {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a factorization meets a zero pivot or a solve misses its
/// residual contract.
class SingularMatrixError : public Error {
 public:
  SingularMatrixError(const std::string& what, std::int64_t pivot)
      : Error(what), pivot_(pivot) {}
  std::int64_t pivot() const noexcept { return pivot_; }

 private:
  std::int64_t pivot_;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Non-finite values showed up during time integration.
class NumericalFailure : public Error {
 public:
  NumericalFailure(const std::string& what, std::int64_t step)
      : Error(what), step_(step) {}
  std::int64_t step() const noexcept { return step_; }

 private:
  std::int64_t step_;
};

/// Missing, corrupt or inconsistent on-disk artifact.
class ArtifactError : public Error {
 public:
  using Error::Error;
};

/// Bad configuration or command-line usage.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace romns
