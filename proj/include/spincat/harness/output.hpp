#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace spincat {

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
  int column(const std::string& name) const;
  /// Numeric value of a cell; throws for strings.
  double number(std::size_t row, const std::string& col) const;
  const std::string& text(std::size_t row, const std::string& col) const;
};

struct RunRecord {
  std::string experiment;
  std::vector<Table> tables;
  nlohmann::json summary = nlohmann::json::object();
  nlohmann::json config = nlohmann::json::object();
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::string version = SPINCAT_VERSION;

  const Table& table(const std::string& name) const;
};

enum class OutputFormat { csv, json };

/// Doubles use %.12g; non-finite values print as nan/inf.
std::string format_cell(const Cell& cell);
std::string to_csv(const Table& table);
/// Provenance, summary and (for json format) the tables.
std::string to_json(const RunRecord& record, bool includeTables);

/// csv: <experiment>_<table>.csv files plus <experiment>.json sidecar.
/// json: a single <experiment>.json holding everything. Returns the paths
/// written.
std::vector<std::filesystem::path> write_outputs(const RunRecord& record,
                                                 const std::filesystem::path& dir,
                                                 OutputFormat format);

}  // namespace spincat
