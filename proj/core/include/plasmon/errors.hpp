#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace plasmon {

/// Input outside an operation's domain (non-positive length, l < 1, NaN...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Singular systems, failed root finds, non-converging series.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scenario configuration problems. Collects every violation found in one
/// pass so the user can fix a file in a single edit.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);

  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/// Throws DomainError naming `what` unless `value` is finite.
void require_finite(double value, const char* what);

/// Throws DomainError naming `what` unless `value` is finite and > 0.
void require_positive(double value, const char* what);

/// Throws DomainError naming `what` unless `value` is finite and >= 0.
void require_non_negative(double value, const char* what);

}  // namespace plasmon
