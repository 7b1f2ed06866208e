#include "evgrip/csvio.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "evgrip/errors.hpp"

namespace evgrip {

std::string format_csv_double(double v) {
  if (v == 0.0) v = 0.0;  // never print -0.000000
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     const std::string& header)
    : out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) fail(Err::IoFailure, "cannot open " + path.string());
  out_ << header << '\n';
}

void CsvWriter::begin_row() { first_in_row_ = true; }

void CsvWriter::field(double v) {
  if (!first_in_row_) out_ << ',';
  first_in_row_ = false;
  out_ << format_csv_double(v);
}

void CsvWriter::field(std::int64_t v) {
  if (!first_in_row_) out_ << ',';
  first_in_row_ = false;
  out_ << v;
}

void CsvWriter::field(std::uint64_t v) {
  if (!first_in_row_) out_ << ',';
  first_in_row_ = false;
  out_ << v;
}

void CsvWriter::field(int v) { field(static_cast<std::int64_t>(v)); }

void CsvWriter::field(bool v) { field(static_cast<std::int64_t>(v ? 1 : 0)); }

void CsvWriter::end_row() { out_ << '\n'; }

void CsvWriter::close() {
  if (out_.is_open()) {
    out_.flush();
    if (!out_) fail(Err::IoFailure, "csv write failed");
    out_.close();
  }
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Err::IoFailure, "cannot open " + path.string());
  CsvTable table;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    if (header) {
      while (std::getline(ss, cell, ',')) table.columns.push_back(cell);
      header = false;
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != table.columns.size())
      fail(Err::IoFailure, "ragged csv row in " + path.string());
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace evgrip
