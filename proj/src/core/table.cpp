#include "table.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace qsw {

void Table::addRow(std::initializer_list<double> values) {
  addRow(std::vector<double>(values));
}

void Table::addRow(std::vector<double> values) {
  if (values.size() != columns.size()) {
    throw std::invalid_argument("table: row width does not match column count");
  }
  rows.push_back(std::move(values));
}

std::string formatCell(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string Table::toCsv() const {
  std::string out;
  for (const auto& m : meta) {
    out += "# ";
    out += m;
    out += '\n';
  }
  for (size_t c = 0; c < columns.size(); ++c) {
    if (c) out += ',';
    out += columns[c];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += formatCell(row[c]);
    }
    out += '\n';
  }
  return out;
}

void Table::writeCsv(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("table: cannot open " + path + " for writing");
  const std::string csv = toCsv();
  f.write(csv.data(), std::streamsize(csv.size()));
  if (!f) throw std::runtime_error("table: write to " + path + " failed");
}

}  // namespace qsw
