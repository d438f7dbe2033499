#include "qwalk/entropy.hpp"

#include <cmath>

#include "qwalk/error.hpp"

namespace qwalk {

double shannon_entropy(std::span<const double> dist) {
  double total = 0.0;
  double h = 0.0;
  for (double p : dist) {
    if (!(p >= 0.0)) throw Error(ErrorKind::NotADistribution, "negative or NaN entry");
    total += p;
    if (p > 0.0) h -= p * std::log(p);
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorKind::NotADistribution, "entries do not sum to 1");
  }
  return h;
}

std::vector<EntropyMinimum> find_entropy_minima(const EntropySeries& series, std::int64_t window) {
  if (window < 1) throw Error(ErrorKind::InvalidArgument, "window must be >= 1");
  std::vector<EntropyMinimum> out;
  const std::size_t n = series.size();
  if (n == 0) return out;
  const std::int64_t first = series.times.front();
  const std::int64_t last = series.times.back();
  std::size_t lo = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t t = series.times[i];
    if (t - window < first || t + window > last) continue;
    while (series.times[lo] < t - window) ++lo;
    const double h = series.entropy[i];
    bool is_min = true;
    for (std::size_t j = lo; j < n && series.times[j] <= t + window; ++j) {
      if (j == i) continue;
      if (j < i ? series.entropy[j] <= h : series.entropy[j] < h) {
        is_min = false;
        break;
      }
    }
    if (is_min) out.push_back({t, h});
  }
  return out;
}

}  // namespace qwalk
