#pragma once

#include <initializer_list>
#include <string>
#include <vector>

namespace qsw {

// Columnar numeric results with '#'-prefixed metadata, serialized as CSV.
// Every simulation and sweep produces one of these; byte-identical output for
// identical seed and configuration is part of the contract.
struct Table {
  std::vector<std::string> meta;  // emitted as "# <line>"
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void addRow(std::initializer_list<double> values);
  void addRow(std::vector<double> values);

  std::string toCsv() const;
  void writeCsv(const std::string& path) const;
};

// Decimal formatting used in CSV cells: 12 significant digits.
std::string formatCell(double v);

}  // namespace qsw
