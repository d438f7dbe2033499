#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qwalk/coin.hpp"
#include "qwalk/dense.hpp"
#include "qwalk/entropy.hpp"
#include "qwalk/walk1d.hpp"

namespace qwalk {

/// Revival timescale 4/(pi y).
double tau(const CoinParameters& coin);

struct RevivalEntry {
  int p;
  int q;
  std::int64_t t_predicted;
  std::optional<double> rho;
};

struct RevivalSchedule {
  int n = 0;
  CoinParameters coin;
  double tau = 0.0;
  std::vector<RevivalEntry> entries;
};

/// t = round(tau n^2 p / (8q) + rho n) for each coprime (p, q).
RevivalSchedule revival_times(int n, const CoinParameters& coin,
                              std::span<const std::pair<int, int>> fractions,
                              std::optional<double> rho = std::nullopt);

/// Leading-order value of (lambda e^{-s i phi})^{tau_mult n^2 + rho n} for
/// k = beta sqrt(n).
cplx eigenvalue_power_approx(double beta, double tau_mult, double rho, const CoinParameters& coin,
                             int s);

/// Entropy of the conditional site distribution at t = 0, stride, 2 stride, ...
/// up to t_max.
EntropySeries entropy_series(int n, const CoinParameters& coin, const WalkState1D& psi0,
                             std::int64_t t_max, std::int64_t stride);

/// Same, sampled on [t_begin, t_end] only.
EntropySeries entropy_series_range(const CoinParameters& coin, const WalkState1D& psi0,
                                   std::int64_t t_begin, std::int64_t t_end,
                                   std::int64_t stride);

struct RefinedMinimum {
  std::int64_t t;
  double entropy;
};

/// Entropy minimum on [t_lo, t_hi]: stride-16 scan, then a stride-1 scan
/// within +-2 window of the coarse winner. Throws NoMinimum when the minimum
/// sits on an end of the interval.
RefinedMinimum refine_entropy_minimum(const CoinParameters& coin, const WalkState1D& psi0,
                                      std::int64_t t_lo, std::int64_t t_hi, std::int64_t window);

struct RhoEstimate {
  double rho;
  std::int64_t t_predicted;
  std::int64_t t_min;
  double entropy;
};

RhoEstimate estimate_rho(int n, const CoinParameters& coin, int p, int q,
                         const WalkState1D& psi0, std::int64_t search_halfwidth,
                         std::int64_t window = 500);

struct Heatmap {
  RMatrix full;   // 2n x 2n, |Q^t|^2 entrywise
  RMatrix sites;  // n x n, 2x2 blocks summed
};

inline constexpr int kDefaultDenseCap = 1600;

Heatmap matrix_power_heatmap(int n, const CoinParameters& coin, std::int64_t t,
                             int dense_cap = kDefaultDenseCap);

/// Fraction of the total mass of a square map within `width`/2 of the main
/// diagonal (anti = false) or the anti-diagonal (anti = true).
double band_mass_fraction(const RMatrix& map, int width, bool anti);

/// Centered moving average; the window shrinks at the ends.
std::vector<double> moving_average(std::span<const double> values, int width);

/// Local maxima (plateaus count once) that rise above prominence * max, after
/// summing adjacent site pairs and smoothing the pair sums.
int peak_count(std::span<const double> dist, double prominence = 0.25, int smoothing = 5);

}  // namespace qwalk
