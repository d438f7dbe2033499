#pragma once

#include <string>
#include <vector>

#include "qwalk/dense.hpp"
#include "qwalk/entropy.hpp"

namespace qwalk {

/// Shortest text that parses back to the same double ("%.17g").
std::string format_double(double v);

/// Header plus rows of already formatted cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

std::string to_csv(const CsvTable& table);

/// Throws IOFailure.
void write_text(const std::string& path, const std::string& text);
void write_csv(const std::string& path, const CsvTable& table);

/// t, survival, entropy.
CsvTable entropy_table(const EntropySeries& series);

/// Binary P5, 16-bit big-endian, max-normalized. With log_scale the value v
/// maps to log(1 + 1e4 v / vmax) / log(1 + 1e4) before quantization.
void write_pgm(const RMatrix& image, const std::string& path, bool log_scale);

/// Encoded bytes of write_pgm, for testing.
std::string encode_pgm(const RMatrix& image, bool log_scale);

}  // namespace qwalk
