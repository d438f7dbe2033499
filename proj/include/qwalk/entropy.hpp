#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace qwalk {

/// Time-indexed entropy scan of a conditional position distribution.
struct EntropySeries {
  std::vector<std::int64_t> times;
  std::vector<double> entropy;   // natural log
  std::vector<double> survival;  // unnormalized squared norm

  std::size_t size() const { return times.size(); }
  void push(std::int64_t t, double h, double surv) {
    times.push_back(t);
    entropy.push_back(h);
    survival.push_back(surv);
  }
};

/// -sum p log p with 0 log 0 = 0. Throws NotADistribution if an entry is
/// negative or the sum is off by more than 1e-9.
double shannon_entropy(std::span<const double> dist);

struct EntropyMinimum {
  std::int64_t t;
  double entropy;
};

/// Times whose entropy is the minimum of every sample within
/// [t - window, t + window] (strict against earlier samples, so ties go to the
/// smaller t). Only samples whose whole window lies inside the series count.
std::vector<EntropyMinimum> find_entropy_minima(const EntropySeries& series, std::int64_t window);

}  // namespace qwalk
