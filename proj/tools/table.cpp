#include "dprime/table.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace dprime {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

Cell parse_cell(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec == std::errc() && res.ptr == s.data() + s.size() && !s.empty()) return v;
  return s;
}

}  // namespace

void write_csv(std::ostream& os, std::span<const Table> tables) {
  bool first = true;
  for (const auto& t : tables) {
    if (!first) os << '\n';
    first = false;
    if (!t.name.empty()) os << "# " << t.name << '\n';
    for (std::size_t c = 0; c < t.columns.size(); ++c)
      os << (c ? "," : "") << quote_if_needed(t.columns[c]);
    os << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) os << ',';
        if (const auto* d = std::get_if<double>(&row[c]))
          os << format_number(*d);
        else
          os << quote_if_needed(std::get<std::string>(row[c]));
      }
      os << '\n';
    }
  }
}

std::vector<Table> read_csv(std::istream& is) {
  std::vector<Table> out;
  std::string line;
  bool need_header = true;
  while (std::getline(is, line)) {
    if (line.empty()) {
      need_header = true;
      continue;
    }
    if (line.rfind("# ", 0) == 0) {
      out.push_back(Table{line.substr(2), {}, {}});
      need_header = true;
      continue;
    }
    if (need_header) {
      if (out.empty() || !out.back().columns.empty()) out.push_back(Table{});
      out.back().columns = split_csv_line(line);
      need_header = false;
      continue;
    }
    std::vector<Cell> row;
    for (const auto& s : split_csv_line(line)) row.push_back(parse_cell(s));
    if (row.size() != out.back().columns.size())
      throw std::runtime_error("read_csv: row width does not match header");
    out.back().rows.push_back(std::move(row));
  }
  return out;
}

void write_json(std::ostream& os, std::span<const Table> tables) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (const auto& t : tables) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
      nlohmann::ordered_json obj = nlohmann::ordered_json::object();
      for (std::size_t c = 0; c < row.size() && c < t.columns.size(); ++c) {
        if (const auto* d = std::get_if<double>(&row[c])) {
          if (std::isfinite(*d))
            obj[t.columns[c]] = *d;
          else
            obj[t.columns[c]] = nullptr;
        } else {
          obj[t.columns[c]] = std::get<std::string>(row[c]);
        }
      }
      rows.push_back(std::move(obj));
    }
    doc[t.name.empty() ? "rows" : t.name] = std::move(rows);
  }
  os << doc.dump(2) << '\n';
}

}  // namespace dprime
