#include "spincat/harness/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace spincat {

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw std::invalid_argument("Table::add: row width does not match columns");
  rows.push_back(std::move(row));
}

int Table::column(const std::string& col) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == col) return static_cast<int>(i);
  throw std::out_of_range("no column '" + col + "' in table " + name);
}

double Table::number(std::size_t row, const std::string& col) const {
  const Cell& c = rows.at(row).at(column(col));
  if (auto d = std::get_if<double>(&c)) return *d;
  if (auto i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  throw std::invalid_argument("cell " + col + " is not numeric");
}

const std::string& Table::text(std::size_t row, const std::string& col) const {
  return std::get<std::string>(rows.at(row).at(column(col)));
}

const Table& RunRecord::table(const std::string& name) const {
  for (const auto& t : tables)
    if (t.name == name) return t;
  throw std::out_of_range("no table '" + name + "'");
}

std::string format_cell(const Cell& cell) {
  if (auto s = std::get_if<std::string>(&cell)) return *s;
  if (auto i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  const double d = std::get<double>(cell);
  if (std::isnan(d)) return "nan";
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", d);
  return buf;
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    out += (i ? "," : "") + table.columns[i];
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_cell(row[i]);
    out += '\n';
  }
  return out;
}

namespace {

nlohmann::json cell_json(const Cell& c) {
  if (auto s = std::get_if<std::string>(&c)) return *s;
  if (auto i = std::get_if<std::int64_t>(&c)) return *i;
  const double d = std::get<double>(c);
  if (!std::isfinite(d)) return nullptr;
  return d;
}

}  // namespace

std::string to_json(const RunRecord& record, bool includeTables) {
  nlohmann::json j;
  j["experiment"] = record.experiment;
  char hash[20];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(record.config_hash));
  j["provenance"] = {{"config_hash", hash}, {"seed", record.seed}, {"version", record.version}};
  j["config"] = record.config;
  j["summary"] = record.summary;
  if (includeTables) {
    nlohmann::json tables = nlohmann::json::object();
    for (const auto& t : record.tables) {
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& row : t.rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = cell_json(row[i]);
        rows.push_back(obj);
      }
      tables[t.name] = {{"columns", t.columns}, {"rows", rows}};
    }
    j["tables"] = tables;
  }
  return j.dump(2) + "\n";
}

std::vector<std::filesystem::path> write_outputs(const RunRecord& record,
                                                 const std::filesystem::path& dir,
                                                 OutputFormat format) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  auto write = [&](const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << content;
    written.push_back(p);
  };
  if (format == OutputFormat::csv) {
    for (const auto& t : record.tables)
      write(dir / (record.experiment + "_" + t.name + ".csv"), to_csv(t));
  }
  write(dir / (record.experiment + ".json"), to_json(record, format == OutputFormat::json));
  return written;
}

}  // namespace spincat
