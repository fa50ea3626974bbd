#pragma once

// Column-typed result table with CSV and JSON writers.

#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace gpd::cli {

using Cell = std::variant<double, long long, std::string, bool>;

struct Column {
  std::string name;
  std::string unit;  // "1" for dimensionless, "-" for labels
};

struct Table {
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> warnings;

  void add_row(std::vector<Cell> row);
  std::size_t column_index(const std::string& name) const;
};

struct Metadata {
  std::string version;
  std::string command;
  nlohmann::ordered_json config;
};

/// %.17g for doubles; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double x);

/// `#` header (version, command, one-line config echo, units, warnings), then a header row
/// and one line per row.
void write_csv(std::ostream& os, const Table& table, const Metadata& meta);
/// Same content as a JSON object; non-finite numbers become null.
void write_json(std::ostream& os, const Table& table, const Metadata& meta);

}  // namespace gpd::cli
