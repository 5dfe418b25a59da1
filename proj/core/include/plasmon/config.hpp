#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "plasmon/scenario.hpp"

namespace plasmon {

// Scenario files are flat sectioned key = value text:
//
//   # comment
//   [metal]
//   omega_p_ev = 4
//
// Sections: metal, environment, particle, emitter, cavity, couplings, sweep,
// run. Units are part of key names. Unknown sections or keys, duplicate
// keys, malformed or non-finite numbers and missing required keys are all
// reported together in one ConfigError.

Scenario parse_config_text(std::string_view text);
Scenario parse_config(const std::filesystem::path& path);

/// Canonical text form; parse_config_text(serialize_config(s)) == s.
std::string serialize_config(const Scenario& scenario);

/// Names accepted by builtin_config: fig1c, fig2, fig3, fig4.
const std::vector<std::string>& builtin_names();
/// Text of a built-in figure scenario. Throws ConfigError for unknown names.
std::string_view builtin_config(std::string_view name);

/// Built-in name or path on disk.
Scenario load_scenario(std::string_view name_or_path);

/// Recovers the scenario embedded in a result file's '#' metadata block.
Scenario parse_metadata(std::string_view result_text);

/// Levenshtein distance, used for "did you mean" hints.
std::size_t edit_distance(std::string_view a, std::string_view b);

}  // namespace plasmon
