#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace plasmon::cli {

/// Exit codes of plasmon-sim.
inline constexpr int kOk = 0;
inline constexpr int kConfigError = 1;
inline constexpr int kNumericalError = 2;

/// Runs one plasmon-sim invocation; `args` excludes the program name.
/// Errors go to `err` as "ERROR[<code>]: <message>" lines.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace plasmon::cli
