#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tlasso {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Header row plus string cells. Empty cells stay empty; quoting with '"' is
// honored, embedded quotes doubled.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a named column; throws IoError when absent.
  int column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text);

// Empty cells and the usual NA spellings parse as missing (returns false).
bool parse_cell(const std::string& cell, double& out);

}  // namespace tlasso
