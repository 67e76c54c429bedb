#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace dprime {

using Cell = std::variant<double, std::string>;

/// A named block of rows. Commands emit one or more of these.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Shortest decimal form that parses back to the same double.
std::string format_number(double v);

/// Blocks are introduced by a "# name" line and separated by a blank line.
void write_csv(std::ostream& os, std::span<const Table> tables);
std::vector<Table> read_csv(std::istream& is);

/// {"name": [{"column": value, ...}, ...], ...}; non-finite numbers become null.
void write_json(std::ostream& os, std::span<const Table> tables);

}  // namespace dprime
