#pragma once
#include <string>
#include <vector>

namespace flatcal {

// Deterministic CSV writing: LF line endings, '.' decimal separator, %.12g
// formatting. Writers collect rows in memory so output order never depends on
// thread scheduling.
struct CsvWriter {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  static std::string num(double v);
  void add_row(std::vector<std::string> cells);
  void write(const std::string& path) const;
};

// Minimal reader for round-trip tests: splits on commas, no quoting.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  static CsvTable read(const std::string& path);
};

}  // namespace flatcal
