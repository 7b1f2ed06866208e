#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

// Trace files are byte-compared across runs, so formatting is pinned:
// header row, comma separators, "%.6f" reals, LF line endings.

namespace evgrip {

std::string format_csv_double(double v);

class CsvWriter {
 public:
  CsvWriter() = default;
  CsvWriter(const std::filesystem::path& path, const std::string& header);

  void begin_row();
  void field(double v);
  void field(std::int64_t v);
  void field(std::uint64_t v);
  void field(int v);
  void field(bool v);
  void end_row();
  void close();

 private:
  std::ofstream out_;
  bool first_in_row_ = true;
};

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace evgrip
