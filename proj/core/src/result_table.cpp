#include "plasmon/result_table.hpp"

#include <fstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "plasmon/config.hpp"
#include "plasmon/errors.hpp"

namespace plasmon {

std::string_view version() { return PLASMON_VERSION_STRING; }

std::string format_number(double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  return fmt::format("{:.9g}", value);
}

ResultTable::ResultTable(std::string name, std::vector<std::string> columns)
    : name_(std::move(name)), columns_(std::move(columns)) {
  if (columns_.empty()) throw DomainError("a result table needs at least one column");
}

void ResultTable::add_row(std::vector<double> row) {
  if (row.size() != columns_.size()) {
    throw DomainError(fmt::format("table {}: row has {} values, header has {}", name_, row.size(),
                                  columns_.size()));
  }
  rows_.push_back(std::move(row));
}

void ResultTable::add_meta(std::string key, std::string value) {
  meta_.emplace_back(std::move(key), std::move(value));
}

void ResultTable::add_meta(std::string key, double value) {
  add_meta(std::move(key), format_number(value));
}

void ResultTable::set_scenario(const Scenario& scenario) {
  add_meta("scenario", scenario.name);
  config_ = serialize_config(scenario);
}

void ResultTable::describe(const ResolvedSystem& system) {
  set_scenario(system.scenario);
  add_meta("coupling_mode", std::string(to_string(system.scenario.couplings.mode)));
  for (const auto& p : system.parameters) {
    add_meta("param." + p.name,
             fmt::format("{} [{}]", format_number(p.value), to_string(p.provenance)));
  }
  if (system.calibration) {
    const auto& c = *system.calibration;
    add_meta("calibration.iterations", std::to_string(c.iterations));
    add_meta("calibration.residual_splitting", c.residual_splitting);
    add_meta("calibration.residual_narrow_width", c.residual_narrow);
    add_meta("calibration.note",
             "G and g1 fitted to the target splitting and narrow linewidth at zero "
             "cavity-emitter detuning; point-dipole ratios above 1 mean the tip field exceeds "
             "the point-dipole estimate");
  }
  for (const auto& w : system.warnings) add_meta("warning", w);
}

std::string ResultTable::to_csv() const {
  std::string out;
  out += fmt::format("# tool: plasmon-sim {}\n", version());
  out += fmt::format("# table: {}\n", name_);
  for (const auto& [key, value] : meta_) out += fmt::format("# {}: {}\n", key, value);
  if (!config_.empty()) {
    out += "# config-begin\n";
    std::size_t pos = 0;
    while (pos < config_.size()) {
      auto end = config_.find('\n', pos);
      if (end == std::string::npos) end = config_.size();
      const auto line = std::string_view(config_).substr(pos, end - pos);
      out += line.empty() ? std::string("#\n") : fmt::format("# {}\n", line);
      pos = end + 1;
    }
    out += "# config-end\n";
  }
  out += fmt::format("{}\n", fmt::join(columns_, ","));
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_number(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string ResultTable::to_json() const {
  nlohmann::ordered_json j;
  j["tool"] = fmt::format("plasmon-sim {}", version());
  j["table"] = name_;
  auto meta = nlohmann::ordered_json::array();
  for (const auto& [key, value] : meta_) meta.push_back({{"key", key}, {"value", value}});
  j["metadata"] = meta;
  j["config"] = config_;
  j["columns"] = columns_;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : rows_) {
    auto r = nlohmann::ordered_json::array();
    for (double v : row) r.push_back(std::stod(format_number(v)));
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j.dump(1) + "\n";
}

std::filesystem::path write_table(const ResultTable& table, const std::filesystem::path& dir,
                                  OutputFormat format) {
  std::filesystem::create_directories(dir);
  const auto path = dir / (table.name() + (format == OutputFormat::csv ? ".csv" : ".json"));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (out) out << (format == OutputFormat::csv ? table.to_csv() : table.to_json());
  if (!out) {
    throw std::filesystem::filesystem_error("cannot write result table", path,
                                            std::make_error_code(std::errc::io_error));
  }
  return path;
}

}  // namespace plasmon
