#include "plasmon/quantities.hpp"

#include <cmath>
#include <string>

#include "plasmon/errors.hpp"

namespace plasmon {

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
  std::string out;
  for (const auto& p : problems) {
    if (!out.empty()) out += "; ";
    out += p;
  }
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {}

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) throw DomainError(std::string(what) + " must be finite");
}

void require_positive(double value, const char* what) {
  require_finite(value, what);
  if (value <= 0.0) throw DomainError(std::string(what) + " must be positive");
}

void require_non_negative(double value, const char* what) {
  require_finite(value, what);
  if (value < 0.0) throw DomainError(std::string(what) + " must be non-negative");
}

double wavevector(Energy omega, double eps_b) {
  require_positive(omega.value, "omega");
  require_positive(eps_b, "eps_b");
  return std::sqrt(eps_b) * omega.value / constants::hbar_c;
}

}  // namespace plasmon
