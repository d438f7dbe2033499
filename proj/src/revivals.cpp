#include "qwalk/revivals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "qwalk/error.hpp"

namespace qwalk {

double tau(const CoinParameters& coin) { return 4.0 / (std::numbers::pi * coin.y); }

RevivalSchedule revival_times(int n, const CoinParameters& coin,
                              std::span<const std::pair<int, int>> fractions,
                              std::optional<double> rho) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "n must be >= 2");
  RevivalSchedule sched{n, coin, tau(coin), {}};
  const double n2 = static_cast<double>(n) * n;
  for (auto [p, q] : fractions) {
    if (p < 1 || q < 1 || std::gcd(p, q) != 1) {
      throw Error(ErrorKind::InvalidArgument, "fractions need coprime positive p, q");
    }
    const double t = sched.tau * n2 * p / (8.0 * q) + rho.value_or(0.0) * n;
    sched.entries.push_back({p, q, std::llround(t), rho});
  }
  return sched;
}

cplx eigenvalue_power_approx(double beta, double tau_mult, double rho, const CoinParameters& coin,
                             int s) {
  const double x = std::numbers::pi * beta;
  const double x2 = x * x;
  const double y = coin.y;
  const double modulus = std::exp(-x2 * y * y * tau_mult);
  const double arg = s * 0.5 * x2 * y * (rho - x2 * tau_mult * (3 * y * y + 1) / 12.0);
  return std::polar(modulus, arg);
}

namespace {

double entropy_now(const WalkState1D& state) {
  const auto dist = conditional_distribution(state);
  return shannon_entropy(dist);
}

}  // namespace

EntropySeries entropy_series_range(const CoinParameters& coin, const WalkState1D& psi0,
                                   std::int64_t t_begin, std::int64_t t_end,
                                   std::int64_t stride) {
  if (stride < 1 || t_begin < 0 || t_end < t_begin) {
    throw Error(ErrorKind::InvalidArgument, "bad scan range");
  }
  if (std::abs(psi0.norm_squared() - 1.0) > 1e-9) {
    throw Error(ErrorKind::InvalidArgument, "initial state must have unit norm");
  }
  Walker1D walker(psi0, coin);
  walker.advance(t_begin);
  EntropySeries series;
  for (std::int64_t t = t_begin; t <= t_end; t += stride) {
    if (t > walker.time()) walker.advance(t - walker.time());
    series.push(t, entropy_now(walker.state()), walker.state().norm_squared());
  }
  return series;
}

EntropySeries entropy_series(int n, const CoinParameters& coin, const WalkState1D& psi0,
                             std::int64_t t_max, std::int64_t stride) {
  if (psi0.sites() != n) throw Error(ErrorKind::InvalidArgument, "state size differs from n");
  return entropy_series_range(coin, psi0, 0, t_max, stride);
}

namespace {

std::size_t argmin(const EntropySeries& s) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s.entropy[i] < s.entropy[best]) best = i;
  }
  return best;
}

}  // namespace

RefinedMinimum refine_entropy_minimum(const CoinParameters& coin, const WalkState1D& psi0,
                                      std::int64_t t_lo, std::int64_t t_hi, std::int64_t window) {
  constexpr std::int64_t kCoarse = 16;
  if (t_lo < 0 || t_hi - t_lo < 2 * kCoarse || window < 1) {
    throw Error(ErrorKind::InvalidArgument, "search interval too small");
  }
  const auto coarse = entropy_series_range(coin, psi0, t_lo, t_hi, kCoarse);
  const std::size_t c = argmin(coarse);
  if (c == 0 || c + 1 == coarse.size()) {
    throw Error(ErrorKind::NoMinimum, "entropy has no interior minimum in the window");
  }
  const std::int64_t center = coarse.times[c];
  const std::int64_t lo = std::max(t_lo, center - 2 * window);
  const std::int64_t hi = std::min(t_hi, center + 2 * window);
  const auto fine = entropy_series_range(coin, psi0, lo, hi, 1);
  const std::size_t f = argmin(fine);
  const std::int64_t t = fine.times[f];
  if (t == t_lo || t == t_hi) {
    throw Error(ErrorKind::NoMinimum, "entropy has no interior minimum in the window");
  }
  return {t, fine.entropy[f]};
}

RhoEstimate estimate_rho(int n, const CoinParameters& coin, int p, int q,
                         const WalkState1D& psi0, std::int64_t search_halfwidth,
                         std::int64_t window) {
  if (search_halfwidth < n) throw Error(ErrorKind::InvalidArgument, "search half-width below n");
  const std::pair<int, int> frac{p, q};
  const auto sched = revival_times(n, coin, std::span(&frac, 1));
  const std::int64_t t0 = sched.entries.front().t_predicted;
  const auto m = refine_entropy_minimum(coin, psi0, std::max<std::int64_t>(0, t0 - search_halfwidth),
                                        t0 + search_halfwidth, window);
  return {static_cast<double>(m.t - t0) / n, t0, m.t, m.entropy};
}

Heatmap matrix_power_heatmap(int n, const CoinParameters& coin, std::int64_t t, int dense_cap) {
  if (t < 0) throw Error(ErrorKind::InvalidArgument, "negative time");
  if (2 * n > dense_cap) {
    throw Error(ErrorKind::ResourceLimit, "2n exceeds the dense matrix cap");
  }
  const CMatrix qt = matrix_power(walk_operator_dense(n, coin), t);
  const std::size_t dim = qt.dim();
  Heatmap h{RMatrix(dim, dim), RMatrix(dim / 2, dim / 2)};
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      const double v = std::norm(qt(r, c));
      h.full(r, c) = v;
      h.sites(r / 2, c / 2) += v;
    }
  }
  return h;
}

double band_mass_fraction(const RMatrix& map, int width, bool anti) {
  const auto n = static_cast<long>(map.rows);
  double total = 0.0;
  double band = 0.0;
  for (long r = 0; r < n; ++r) {
    for (long c = 0; c < static_cast<long>(map.cols); ++c) {
      const double v = map(r, c);
      total += v;
      const long off = anti ? r + c - (n - 1) : r - c;
      if (2 * std::abs(off) <= width) band += v;
    }
  }
  return total > 0.0 ? band / total : 0.0;
}

std::vector<double> moving_average(std::span<const double> values, int width) {
  const long n = static_cast<long>(values.size());
  const long half = std::max(width, 1) / 2;
  std::vector<double> out(values.size());
  for (long i = 0; i < n; ++i) {
    const long lo = std::max(0L, i - half);
    const long hi = std::min(n - 1, i + half);
    double acc = 0.0;
    for (long j = lo; j <= hi; ++j) acc += values[j];
    out[i] = acc / static_cast<double>(hi - lo + 1);
  }
  return out;
}

int peak_count(std::span<const double> dist, double prominence, int smoothing) {
  if (!(prominence > 0.0 && prominence < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "prominence must lie in (0, 1)");
  }
  if (dist.empty()) return 0;
  // The walk lives on one sublattice at a time, so every other site is empty;
  // summing site pairs first keeps that comb from reading as separate peaks.
  std::vector<double> pairs((dist.size() + 1) / 2);
  for (std::size_t k = 0; k < dist.size(); ++k) pairs[k / 2] += dist[k];
  const auto s = moving_average(pairs, smoothing);
  const double top = *std::max_element(s.begin(), s.end());
  if (top <= 0.0) return 0;
  const double threshold = prominence * top;
  int peaks = 0;
  const std::size_t n = s.size();
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && s[j + 1] == s[i]) ++j;
    const bool left_lower = i == 0 || s[i - 1] < s[i];
    const bool right_lower = j + 1 == n || s[j + 1] < s[i];
    if (left_lower && right_lower && s[i] > threshold) ++peaks;
    i = j + 1;
  }
  return peaks;
}

}  // namespace qwalk
