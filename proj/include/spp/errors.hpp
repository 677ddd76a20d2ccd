#pragma once

#include <stdexcept>
#include <string>

namespace spp {

// Precondition or parameter-range violation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Drude denominator hbar*gamma - i*hbar*omega vanished.
class SingularityError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Conductivity has no inductive part, so no TM plasmon is bound.
class NoBoundModeError : public DomainError {
 public:
  using DomainError::DomainError;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class NumericalBlowupError : public std::runtime_error {
 public:
  NumericalBlowupError(const std::string& what, double position)
      : std::runtime_error(what + " at x = " + std::to_string(position) + " m"),
        position_(position) {}
  double position() const noexcept { return position_; }

 private:
  double position_;
};

// Raised by reference implementations when they cannot certify a result.
// Tests must treat this as a hard failure.
class OracleFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : std::runtime_error("config key '" + key + "': " + what), key_(key) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spp
