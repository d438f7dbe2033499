#include "qwalk/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "qwalk/error.hpp"

namespace qwalk {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_csv(const CsvTable& table) {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) out += ',';
      out += cells[k];
    }
    out += '\n';
  };
  line(table.header);
  for (const auto& r : table.rows) line(r);
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorKind::IOFailure, "cannot open " + path + " for writing");
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw Error(ErrorKind::IOFailure, "write to " + path + " failed");
}

void write_csv(const std::string& path, const CsvTable& table) { write_text(path, to_csv(table)); }

CsvTable entropy_table(const EntropySeries& series) {
  CsvTable t{{"t", "survival", "entropy"}, {}};
  for (std::size_t k = 0; k < series.size(); ++k) {
    t.add({std::to_string(series.times[k]), format_double(series.survival[k]),
           format_double(series.entropy[k])});
  }
  return t;
}

std::string encode_pgm(const RMatrix& image, bool log_scale) {
  double vmax = 0.0;
  for (double v : image.values) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorKind::InvalidArgument, "image entries must be finite and nonnegative");
    }
    vmax = std::max(vmax, v);
  }
  std::string out = "P5\n" + std::to_string(image.cols) + " " + std::to_string(image.rows) +
                    "\n65535\n";
  out.reserve(out.size() + 2 * image.values.size());
  const double log_norm = std::log1p(1e4);
  for (double v : image.values) {
    double s = vmax > 0.0 ? v / vmax : 0.0;
    if (log_scale) s = std::log1p(1e4 * s) / log_norm;
    const auto q = static_cast<unsigned>(std::lround(std::clamp(s, 0.0, 1.0) * 65535.0));
    out += static_cast<char>((q >> 8) & 0xff);
    out += static_cast<char>(q & 0xff);
  }
  return out;
}

void write_pgm(const RMatrix& image, const std::string& path, bool log_scale) {
  write_text(path, encode_pgm(image, log_scale));
}

}  // namespace qwalk
