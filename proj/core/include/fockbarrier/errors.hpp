#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fockbarrier {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated an operation's precondition (missing grid values, too few samples, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Out-of-range model or sampler parameter.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Operation has no meaning for the given model (e.g. a separatrix with K = 0).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Fock-basis truncation lost more probability mass than allowed.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double deficit)
      : Error(what), deficit_(deficit) {}
  double deficit() const noexcept { return deficit_; }

 private:
  double deficit_;
};

/// A sampled field does not fit inside its grid.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Eigensolver, root finder or other numerical kernel failed.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// ODE integration of one trajectory failed.
class IntegrationError : public NumericError {
 public:
  IntegrationError(const std::string& what, std::size_t trajectory)
      : NumericError(what), trajectory_(trajectory) {}
  std::size_t trajectory() const noexcept { return trajectory_; }

 private:
  std::size_t trajectory_;
};

/// Energy calibration found no bracketing momentum shift.
class CalibrationError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Experiment configuration failed validation; `path()` names the offending field.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& path, const std::string& message)
      : Error(path.empty() ? message : path + ": " + message), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace fockbarrier
