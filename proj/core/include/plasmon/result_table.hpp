#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "plasmon/experiments.hpp"

namespace plasmon {

/// Version of the library and tool, e.g. "0.1.0".
std::string_view version();

/// A rectangular numeric table plus a '#' metadata block. Numbers are written
/// with 9 significant digits; the block embeds the scenario so that
/// parse_metadata() can rebuild it.
class ResultTable {
 public:
  ResultTable(std::string name, std::vector<std::string> columns);

  /// Throws DomainError when the row length differs from the header.
  void add_row(std::vector<double> row);
  void add_meta(std::string key, std::string value);
  void add_meta(std::string key, double value);
  /// Scenario name, every resolved parameter with provenance, calibration
  /// notes and the serialized config.
  void describe(const ResolvedSystem& system);
  void set_scenario(const Scenario& scenario);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }
  const std::vector<std::pair<std::string, std::string>>& metadata() const { return meta_; }

  std::string to_csv() const;
  std::string to_json() const;

 private:
  std::string name_;
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
  std::vector<std::pair<std::string, std::string>> meta_;
  std::string config_;
};

/// "%.9g" formatting used for every number in result files.
std::string format_number(double value);

enum class OutputFormat { csv, json };

/// Writes <dir>/<table name>.csv|.json, creating the directory; returns the
/// path written.
std::filesystem::path write_table(const ResultTable& table, const std::filesystem::path& dir,
                                  OutputFormat format);

}  // namespace plasmon
