#include "cli/table.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace gpd::cli {

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw std::logic_error("Table::add_row: expected " + std::to_string(columns.size()) +
                           " cells, got " + std::to_string(row.size()));
  rows.push_back(std::move(row));
}

std::size_t Table::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i].name == name) return i;
  throw std::out_of_range("no column '" + name + "'");
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string csv_cell(const Cell& c) {
  struct {
    std::string operator()(double x) const { return format_number(x); }
    std::string operator()(long long x) const { return std::to_string(x); }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      return q + "\"";
    }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
  } v;
  return std::visit(v, c);
}

nlohmann::ordered_json json_cell(const Cell& c) {
  struct {
    nlohmann::ordered_json operator()(double x) const {
      return std::isfinite(x) ? nlohmann::ordered_json(x) : nlohmann::ordered_json(nullptr);
    }
    nlohmann::ordered_json operator()(long long x) const { return x; }
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
    nlohmann::ordered_json operator()(bool b) const { return b; }
  } v;
  return std::visit(v, c);
}

}  // namespace

void write_csv(std::ostream& os, const Table& table, const Metadata& meta) {
  os << "# gpd " << meta.version << "\n";
  os << "# command: " << meta.command << "\n";
  os << "# config: " << meta.config.dump() << "\n";
  os << "# units:";
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    os << (i ? ", " : " ") << table.columns[i].name << "=" << table.columns[i].unit;
  os << "\n";
  for (const auto& w : table.warnings) os << "# warning: " << w << "\n";

  for (std::size_t i = 0; i < table.columns.size(); ++i)
    os << (i ? "," : "") << table.columns[i].name;
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
    os << "\n";
  }
}

void write_json(std::ostream& os, const Table& table, const Metadata& meta) {
  nlohmann::ordered_json j;
  j["version"] = meta.version;
  j["command"] = meta.command;
  j["config"] = meta.config;
  auto& cols = j["columns"] = nlohmann::ordered_json::array();
  for (const auto& c : table.columns) cols.push_back({{"name", c.name}, {"unit", c.unit}});
  auto& rows = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    auto r = nlohmann::ordered_json::array();
    for (const auto& c : row) r.push_back(json_cell(c));
    rows.push_back(std::move(r));
  }
  j["warnings"] = table.warnings;
  os << j.dump(2) << "\n";
}

}  // namespace gpd::cli
