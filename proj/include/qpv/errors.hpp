#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qpv {

/// Root of every error the library raises on purpose. The CLI maps these to
/// exit code 1; anything else is a bug.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A LevelSystem (or rate matrix) that violates a structural invariant.
/// Carries every violation found, not just the first.
class ModelError : public Error {
 public:
  explicit ModelError(std::vector<std::string> issues);
  explicit ModelError(const std::string& issue) : ModelError(std::vector<std::string>{issue}) {}

  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  std::vector<std::string> issues_;
};

/// Malformed or contradictory model configuration file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Requested RK4 step is outside the stability guard.
class StepSizeError : public Error {
 public:
  StepSizeError(const std::string& what, double suggested_dt) : Error(what), suggested_dt_(suggested_dt) {}
  double suggested_dt() const noexcept { return suggested_dt_; }

 private:
  double suggested_dt_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double final_residual)
      : Error(what), final_residual_(final_residual) {}
  double final_residual() const noexcept { return final_residual_; }

 private:
  double final_residual_;
};

/// Steady-state system is singular beyond the expected one-dimensional null space.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// Voltage requested where P_alpha or P_beta is zero (open/closed-circuit limit).
class UndefinedVoltageError : public Error {
 public:
  using Error::Error;
};

class SweepError : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

class EmissionError : public Error {
 public:
  using Error::Error;
};

}  // namespace qpv
