#pragma once

#include <stdexcept>
#include <string>

namespace spincat {

/// Raised when a simulated state leaves the regime the model is valid in
/// (Fock truncation, single-jump heating, probability normalization).
class NumericalGuardError : public std::runtime_error {
 public:
  explicit NumericalGuardError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Raised for malformed experiment configurations.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace spincat
