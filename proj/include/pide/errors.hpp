#pragma once

#include <stdexcept>
#include <string>

namespace pide {

/// A precondition on an argument was violated (bad size, bad range, mismatched inputs).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A closed-form quantity is undefined for the given inputs.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Two routes that must agree did not (e.g. a spectrum that should be real is not).
class NumericalConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The kernel kind has no closed-form continuous Fourier transform.
class UnsupportedKernel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rejected configuration text. Carries the offending line (1-based, 0 if not
/// tied to a line) and key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, std::string key, const std::string& what);

  int line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

 private:
  int line_;
  std::string key_;
};

}  // namespace pide
