#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gpbf/dataset.hpp"
#include "gpbf/errors.hpp"

namespace gpbf {

// Minimal headered numeric CSV. Cells must parse as doubles; the offending
// row and column are reported otherwise.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  Eigen::Index column_index(const std::string& name) const {
    for (std::size_t j = 0; j < columns.size(); ++j)
      if (columns[j] == name) return static_cast<Eigen::Index>(j);
    throw validation_error("column '" + name + "' not found in CSV");
  }

  Vector column(const std::string& name) const {
    const auto j = column_index(name);
    Vector v(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
      v[static_cast<Eigen::Index>(i)] = rows[i][j];
    return v;
  }
};

namespace detail {
inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}
}  // namespace detail

inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open CSV file: " + path);
  CsvTable t;
  std::string line;
  if (!std::getline(in, line))
    throw validation_error("empty CSV file: " + path);
  for (auto& c : detail::split_csv_line(line))
    t.columns.push_back(detail::trim(c));

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split_csv_line(line);
    if (cells.size() != t.columns.size())
      throw validation_error("row " + std::to_string(lineno) + " has " +
                             std::to_string(cells.size()) + " cells, expected " +
                             std::to_string(t.columns.size()));
    std::vector<double> row(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j) {
      const std::string cell = detail::trim(cells[j]);
      char* end = nullptr;
      row[j] = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size())
        throw validation_error("non-numeric cell at row " +
                               std::to_string(lineno) + ", column '" +
                               t.columns[j] + "': '" + cell + "'");
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

// Round-trip-exact double formatting (%.17g).
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_dataset_csv(const std::string& path, const Dataset& d,
                              const std::string& ycol = "y",
                              const std::string& xcol = "x") {
  std::ofstream out(path);
  if (!out) throw validation_error("cannot write CSV file: " + path);
  out << ycol << "," << xcol;
  for (Eigen::Index j = 0; j < d.k(); ++j) out << ",z" << (j + 1);
  out << "\n";
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    out << format_double(d.y[i]) << "," << format_double(d.x[i]);
    for (Eigen::Index j = 0; j < d.k(); ++j)
      out << "," << format_double(d.Z(i, j));
    out << "\n";
  }
}

}  // namespace gpbf
