#include "qwalk/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "qwalk/error.hpp"
#include "qwalk/kernels.hpp"

namespace qwalk {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

constexpr double kNewtonTol = 1e-12;
constexpr int kNewtonMaxIter = 50;

struct NewtonResult {
  cplx theta;
  bool ok = false;
};

cplx residual_g(cplx theta, int n, int sigma, double y) {
  return std::sin(static_cast<double>(n) * theta) -
         static_cast<double>(sigma) * kI * y * std::sin(theta);
}

NewtonResult newton(cplx seed, int k, int n, int s, double y) {
  const int sigma = equation_sign(k, s);
  const double dn = n;
  cplx theta = seed;
  cplx g = residual_g(theta, n, sigma, y);
  int polish = 0;
  for (int it = 0; it < kNewtonMaxIter; ++it) {
    if (std::abs(g) <= kNewtonTol) {
      // A couple of extra steps take the root to working precision.
      if (++polish > 2) break;
    }
    const cplx dg = dn * std::cos(dn * theta) - static_cast<double>(sigma) * kI * y * std::cos(theta);
    if (dg == cplx{}) return {theta, false};
    cplx step = g / dg;
    cplx next = theta - step;
    cplx g_next = residual_g(next, n, sigma, y);
    for (int damp = 0; damp < 30 && std::abs(g_next) > std::abs(g) && std::abs(g) > kNewtonTol;
         ++damp) {
      step *= 0.5;
      next = theta - step;
      g_next = residual_g(next, n, sigma, y);
    }
    if (!(next.real() > 0.0 && next.real() < kPi) || !std::isfinite(next.imag())) {
      return {next, false};
    }
    if (polish > 0 && std::abs(g_next) > std::abs(g)) break;
    theta = next;
    g = g_next;
  }
  if (!(std::abs(g) <= kNewtonTol)) return {theta, false};
  // Correct half-plane and root index.
  if ((theta.imag() > 0.0 ? 1 : -1) != s) return {theta, false};
  if (std::abs(dn * theta.real() / kPi - k) >= 0.5) return {theta, false};
  return {theta, true};
}

cplx solve_primary(int k, int n, int s, const CoinParameters& coin,
                   std::optional<cplx> continuation = std::nullopt) {
  const Regime first = select_regime(k, n);
  std::vector<cplx> seeds{theta_seed(k, n, s, coin, first)};
  for (Regime r : {Regime::FixedK, Regime::Beta, Regime::Alpha}) {
    if (r != first) seeds.push_back(theta_seed(k, n, s, coin, r));
  }
  if (continuation) seeds.push_back(*continuation);
  for (const cplx& seed : seeds) {
    const auto res = newton(seed, k, n, s, coin.y);
    if (res.ok) return res.theta;
  }
  std::ostringstream msg;
  msg << "no root for k=" << k << " n=" << n << " s=" << s;
  throw Error(ErrorKind::NewtonDivergence, msg.str());
}

void check_index(int k, int n) {
  if (n < 2 || k < 1 || k > n - 1) {
    throw Error(ErrorKind::InvalidArgument, "need n >= 2 and 1 <= k <= n-1");
  }
}

}  // namespace

int equation_sign(int k, int s) { return (k % 2 == 0) ? s : -s; }

Regime select_regime(int k, int n) {
  // Integer comparisons: k <= n^(1/3) iff k^3 <= n.
  const long long k3 = static_cast<long long>(k) * k * k;
  const long long nn = n;
  if (k3 <= nn) return Regime::FixedK;
  if (k3 <= nn * nn) return Regime::Beta;
  return Regime::Alpha;
}

cplx theta_fixed_k(int k, int n, int s, const CoinParameters& coin) {
  const double x = kPi * k;
  const double y = coin.y;
  const double dn = n;
  const double ds = s;
  // The n^-4 coefficient is -s i x y (y^2 + x^2/6 + x^2 y^2/6).
  return x / dn + ds * kI * x * y / (dn * dn) - x * y * y / (dn * dn * dn) -
         ds * kI * x * y * (y * y + x * x / 6.0 + x * x * y * y / 6.0) / (dn * dn * dn * dn);
}

cplx theta_alpha(double alpha, int n, int s, const CoinParameters& coin) {
  return kPi * alpha + static_cast<double>(s) * kI / static_cast<double>(n) *
                           std::asinh(coin.y * std::sin(kPi * alpha));
}

cplx theta_beta(double beta, int n, int s, const CoinParameters& coin) {
  const double x = kPi * beta;
  const double y = coin.y;
  const double ds = s;
  const double rn = std::sqrt(static_cast<double>(n));
  const cplx sixy = ds * kI * x * y;
  return x / rn + sixy / (rn * rn * rn) +
         sixy * (ds * kI * y - x * x / 6.0 * (1.0 + y * y)) / std::pow(rn, 5);
}

cplx theta_seed(int k, int n, int s, const CoinParameters& coin, Regime regime) {
  check_index(k, n);
  if (regime == Regime::Auto) regime = select_regime(k, n);
  switch (regime) {
    case Regime::FixedK: return theta_fixed_k(k, n, s, coin);
    case Regime::Beta: return theta_beta(k / std::sqrt(static_cast<double>(n)), n, s, coin);
    case Regime::Alpha:
    case Regime::Auto: break;
  }
  return theta_alpha(static_cast<double>(k) / n, n, s, coin);
}

cplx solve_theta(int k, int n, int s, const CoinParameters& coin) {
  check_index(k, n);
  if (2 * k > n) return kPi - solve_primary(n - k, n, -s, coin);
  return solve_primary(k, n, s, coin);
}

cplx lambda_of_theta(cplx theta, int s, const CoinParameters& coin) {
  if (!std::isfinite(theta.real()) || !std::isfinite(theta.imag())) {
    throw Error(ErrorKind::BranchAmbiguity, "non-finite theta");
  }
  const double A = coin.abs_a();
  const cplx c = std::cos(theta);
  const cplx root = std::sqrt(1.0 - A * A * c * c);
  const cplx first = A * c + static_cast<double>(s) * kI * root;
  const cplx second = A * c - static_cast<double>(s) * kI * root;
  const double m1 = std::abs(first);
  const double m2 = std::abs(second);
  if (std::abs(m1 - 1.0) <= 1e-12 && std::abs(m2 - 1.0) <= 1e-12) return first;
  return m1 < m2 ? first : second;
}

double eigen_residual(std::span<const cplx> v, cplx lambda, const CoinParameters& coin) {
  std::vector<cplx> qv(v.size());
  kernels::walk_step_serial(v, qv, coin.a, coin.b);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    num += std::norm(qv[i] - lambda * v[i]);
    den += std::norm(v[i]);
  }
  return std::sqrt(num / den);
}

std::vector<cplx> eigenvector_exact(cplx lambda, int n, const CoinParameters& coin) {
  if (lambda == cplx{}) throw Error(ErrorKind::InvalidArgument, "lambda must be nonzero");
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "n must be >= 2");
  // G_j = F_j / (F_1 (conj(a) lambda)^j) satisfies
  // G_{j+1} = (lambda^2 + 1) / (conj(a) lambda) G_j - (a / conj(a)) G_{j-1}.
  const cplx a = coin.a;
  const cplx b = coin.b;
  const cplx al = std::conj(a) * lambda;
  const cplx c1 = (lambda * lambda + 1.0) / al;
  const cplx c0 = a / std::conj(a);
  std::vector<cplx> v(2 * static_cast<std::size_t>(n));
  cplx g_prev = 0.0;
  cplx g_curr = 1.0 / al;
  for (int j = 1; j <= n; ++j) {
    v[2 * (j - 1)] = b * g_prev / lambda;
    v[2 * (j - 1) + 1] = g_curr - a * g_prev / lambda;
    const cplx g_next = c1 * g_curr - c0 * g_prev;
    g_prev = g_curr;
    g_curr = g_next;
    const double mag = std::max(std::abs(g_prev), std::abs(g_curr));
    if (mag > 1e150) {
      // Running rescale; entries already written shrink with it.
      const double f = 1.0 / mag;
      g_prev *= f;
      g_curr *= f;
      for (int i = 0; i < 2 * j; ++i) v[i] *= f;
    }
  }
  double norm = 0.0;
  for (const cplx& z : v) norm += std::norm(z);
  norm = std::sqrt(norm);
  if (!std::isfinite(norm) || norm == 0.0) {
    throw Error(ErrorKind::NumericalBlowup, "eigenvector recurrence produced a non-finite norm");
  }
  for (cplx& z : v) z /= norm;
  return v;
}

std::vector<cplx> eigenvector_exact(const SpectralPoint& point, int n,
                                    const CoinParameters& coin) {
  return eigenvector_exact(point.lambda, n, coin);
}

SpectralPoint solve_point(int k, int n, int s, const CoinParameters& coin) {
  SpectralPoint p;
  p.k = k;
  p.s = s;
  p.theta = solve_theta(k, n, s, coin);
  p.lambda = lambda_of_theta(p.theta, s, coin);
  p.residual = eigen_residual(eigenvector_exact(p.lambda, n, coin), p.lambda, coin);
  return p;
}

SpectrumSet compute_spectrum(int n, const CoinParameters& coin) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "n must be >= 2");
  SpectrumSet set;
  set.n = n;
  set.coin = coin;
  const int half = n / 2;
  const int slots = 2 * (n - 1);
  set.points.assign(static_cast<std::size_t>(slots), {});
  auto slot = [](int k, int s) { return 2 * (k - 1) + (s > 0 ? 0 : 1); };

  std::optional<Error> failure;
#pragma omp parallel for schedule(dynamic) num_threads(kernels::thread_limit())
  for (int idx = 0; idx < 2 * half; ++idx) {
    const int k = idx / 2 + 1;
    const int s = (idx % 2 == 0) ? 1 : -1;
    try {
      SpectralPoint p;
      p.k = k;
      p.s = s;
      p.theta = solve_primary(k, n, s, coin);
      p.lambda = lambda_of_theta(p.theta, s, coin);
      set.points[slot(k, s)] = p;
    } catch (const Error& e) {
#pragma omp critical
      if (!failure) failure = e;
    }
  }
  if (failure) throw *failure;

  // Mirror family: theta_{n-k}^{-s} = pi - theta_k^s, lambda -> -lambda.
  for (int k = half + 1; k <= n - 1; ++k) {
    for (int s : {1, -1}) {
      const SpectralPoint& src = set.points[slot(n - k, -s)];
      SpectralPoint p;
      p.k = k;
      p.s = s;
      p.theta = kPi - src.theta;
      p.lambda = -src.lambda;
      set.points[slot(k, s)] = p;
    }
  }

  // Degenerate-root guard: distinct (k, s) must give distinct eigenvalues.
  for (int attempt = 0; attempt < 2; ++attempt) {
    std::vector<int> clash;
    for (int i = 0; i < slots; ++i) {
      for (int j = i + 1; j < slots; ++j) {
        if (std::abs(set.points[i].lambda - set.points[j].lambda) < 1e-9) {
          clash.push_back(i);
          clash.push_back(j);
        }
      }
    }
    if (clash.empty()) break;
    if (attempt == 1) {
      throw Error(ErrorKind::NewtonDivergence, "coincident roots persist after re-solve");
    }
    for (int i : clash) {
      SpectralPoint& p = set.points[i];
      // Re-solve from the neighbour's root shifted by one spacing.
      const int k = 2 * p.k > n ? n - p.k : p.k;
      const int s = 2 * p.k > n ? -p.s : p.s;
      std::optional<cplx> cont;
      if (k > 1) cont = set.points[slot(k - 1, s)].theta + kPi / n;
      const cplx theta = solve_primary(k, n, s, coin, cont);
      const cplx lambda = lambda_of_theta(theta, s, coin);
      if (2 * p.k > n) {
        p.theta = kPi - theta;
        p.lambda = -lambda;
      } else {
        p.theta = theta;
        p.lambda = lambda;
      }
    }
  }

#pragma omp parallel for schedule(dynamic) num_threads(kernels::thread_limit())
  for (int i = 0; i < slots; ++i) {
    SpectralPoint& p = set.points[i];
    p.residual = eigen_residual(eigenvector_exact(p.lambda, n, coin), p.lambda, coin);
  }
  return set;
}

std::vector<std::array<cplx, 2>> eigenvector_asymptotic(int k, int n, int s,
                                                        const CoinParameters& coin,
                                                        std::span<const double> betas) {
  const cplx a = coin.a;
  const cplx b = coin.b;
  const double A = coin.abs_a();
  const double B = coin.abs_b();
  const double y = coin.y;
  const double ds = s;
  const double x = kPi * k;
  const double arg_a = std::arg(a);
  const cplx ab = std::conj(a) * b;
  std::vector<std::array<cplx, 2>> out;
  out.reserve(betas.size());
  for (double beta : betas) {
    const cplx phase = std::polar(1.0, arg_a * n * beta);
    const double sn = std::sin(x * beta);
    const double cs = std::cos(x * beta);
    const cplx r = ab * sn + x / n * ab * (ds * kI * beta * y - 1.0) * cs;
    const cplx l = ds * kI * A * B * sn + x / n * A * A * (1.0 - beta) * cs;
    out.push_back({phase * r, phase * l});
  }
  return out;
}

cplx lambda_fixed_k(int k, int n, int s, const CoinParameters& coin) {
  const double x = kPi * k;
  const double y = coin.y;
  const double dn = n;
  const double ds = s;
  const cplx e = std::polar(1.0, ds * coin.phi);
  const cplx bracket =
      1.5 * ds * kI * y * y + x * x / 24.0 * (3.0 * y + ds * kI * (3.0 * y * y + 1.0));
  return e * (1.0 + ds * kI * x * x * y / (2.0 * dn * dn) - x * x * y * y / (dn * dn * dn) -
              x * x * y / (dn * dn * dn * dn) * bracket);
}

cplx lambda_alpha(double alpha, int n, int s, const CoinParameters& coin) {
  const double A = coin.abs_a();
  const double c = std::cos(kPi * alpha);
  const double sn = std::sin(kPi * alpha);
  const double root = std::sqrt(1.0 - A * A * c * c);
  const cplx e = A * c + static_cast<double>(s) * kI * root;
  return e * (1.0 - (A * sn / root) * std::asinh(coin.y * sn) / static_cast<double>(n));
}

cplx lambda_beta(double beta, int n, int s, const CoinParameters& coin) {
  const double x = kPi * beta;
  const double y = coin.y;
  const double dn = n;
  const double ds = s;
  const cplx e = std::polar(1.0, ds * coin.phi);
  return e * (1.0 + ds * kI * x * x * y / (2.0 * dn) -
              x * x * y / (dn * dn) * (y + x * x / 24.0 * (3.0 * y + ds * kI * (3.0 * y * y + 1.0))));
}

cplx lambda_asymptotic(double index, int n, int s, const CoinParameters& coin, Regime regime) {
  switch (regime) {
    case Regime::FixedK: return lambda_fixed_k(static_cast<int>(index), n, s, coin);
    case Regime::Beta: return lambda_beta(index, n, s, coin);
    case Regime::Alpha: return lambda_alpha(index, n, s, coin);
    case Regime::Auto: break;
  }
  throw Error(ErrorKind::InvalidArgument, "lambda_asymptotic needs an explicit regime");
}

SectorBound sector_bound(int n, const CoinParameters& coin) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "n must be >= 2");
  const double A = coin.abs_a();
  const double ratio = (1.0 + A) / (1.0 - A);
  const double c = std::pow(ratio, 1.0 / (n - 1));
  const double a2 = A * A;
  const double disc = ((2 * A + 1) * (2 * A + 1) * c - (4 * a2 + 4 * A - 1)) *
                      ((2 * A - 1) * (2 * A - 1) * c - (4 * a2 - 4 * A - 1));
  const double r2 =
      ((4 * a2 - 3) - (4 * a2 - 1) * c + std::sqrt(disc)) / (2.0 * (c - 1.0));
  SectorBound out;
  out.r = std::sqrt(r2);
  out.r_first_order = 1.0 - a2 / n * std::log(ratio);
  out.phi = coin.phi;
  return out;
}

bool in_sector(cplx lambda, const SectorBound& bound) {
  if (lambda == cplx{}) return true;
  const double m = std::abs(lambda);
  if (!(m > bound.r && m < 1.0)) return false;
  // Angular sectors of half-width pi/2 - phi about +i and -i, i.e. the
  // complement of the wedges |arg(+-lambda)| < phi; equivalently
  // |Re lambda| < cos(phi) |lambda|.
  return std::abs(lambda.real()) < std::cos(bound.phi) * m;
}

double stabilization_time(int k, double epsilon, int n, const CoinParameters& coin) {
  if (k < 2) throw Error(ErrorKind::InvalidArgument, "k must be >= 2");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "epsilon must lie in (0, 1]");
  }
  const double dn = n;
  return std::log(1.0 / epsilon) * dn * dn * dn /
         (kPi * kPi * coin.y * coin.y * (static_cast<double>(k) * k - 1.0));
}

}  // namespace qwalk
