#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "qwalk/coin.hpp"

namespace qwalk {

/// Asymptotic regime of the theta / eigenvalue expansions:
///  FixedK  k fixed as n grows (x = pi k),
///  Beta    beta = k / sqrt(n) fixed (x = pi beta),
///  Alpha   alpha = k / n fixed.
enum class Regime { Auto, FixedK, Beta, Alpha };

/// Regime used by Auto: FixedK for k <= n^(1/3), Beta for k <= n^(2/3), else Alpha.
Regime select_regime(int k, int n);

/// One nonzero eigenpair of Q_n in the theta parametrization.
/// s = +1 / -1 labels Theta_n^+ / Theta_n^- (sign of Im theta); theta solves
/// sin(n theta) = sigma * i * y * sin(theta) with sigma = (-1)^k s.
struct SpectralPoint {
  int k = 0;
  int s = 1;
  cplx theta;
  cplx lambda;
  double residual = 0.0;
};

/// All 2n eigenvalues of Q_n: 2(n-1) nonzero points plus lambda = 0 twice.
struct SpectrumSet {
  int n = 0;
  CoinParameters coin;
  std::vector<SpectralPoint> points;
  int zero_multiplicity = 2;

  std::size_t size_with_multiplicity() const { return points.size() + zero_multiplicity; }
};

int equation_sign(int k, int s);

/// Truncated expansion for theta_{k,n}^s in the requested regime.
cplx theta_seed(int k, int n, int s, const CoinParameters& coin, Regime regime = Regime::Auto);

/// Newton solve of sin(n theta) - sigma i y sin(theta) = 0 near the k-th root.
/// Roots with k > n/2 are obtained from the mirror root pi - theta_{n-k}^{-s}.
/// Throws NewtonDivergence when every seed fails.
cplx solve_theta(int k, int n, int s, const CoinParameters& coin);

/// Root of lambda^2 - 2|a| cos(theta) lambda + 1 = 0 inside the unit disk.
/// On the unit circle (both roots of modulus 1) the explicit branch
/// |a| cos(theta) + s i sqrt(1 - |a|^2 cos^2(theta)) is returned.
cplx lambda_of_theta(cplx theta, int s, const CoinParameters& coin);

SpectralPoint solve_point(int k, int n, int s, const CoinParameters& coin);

/// Full spectrum; roots for k > n/2 come from negating the k <= n/2 family.
SpectrumSet compute_spectrum(int n, const CoinParameters& coin);

/// Unit-norm eigenvector (length 2n, interleaved R/L) from the transfer
/// recurrence with r_1 = 0. Throws NumericalBlowup on non-finite entries.
std::vector<cplx> eigenvector_exact(cplx lambda, int n, const CoinParameters& coin);
std::vector<cplx> eigenvector_exact(const SpectralPoint& point, int n,
                                    const CoinParameters& coin);

/// ||Q_n v - lambda v|| / ||v||.
double eigen_residual(std::span<const cplx> v, cplx lambda, const CoinParameters& coin);

/// Two-term expansion of the (R, L) eigenvector entries at site j = n beta.
std::vector<std::array<cplx, 2>> eigenvector_asymptotic(int k, int n, int s,
                                                        const CoinParameters& coin,
                                                        std::span<const double> betas);

cplx theta_fixed_k(int k, int n, int s, const CoinParameters& coin);
cplx theta_alpha(double alpha, int n, int s, const CoinParameters& coin);
cplx theta_beta(double beta, int n, int s, const CoinParameters& coin);

cplx lambda_fixed_k(int k, int n, int s, const CoinParameters& coin);
cplx lambda_alpha(double alpha, int n, int s, const CoinParameters& coin);
cplx lambda_beta(double beta, int n, int s, const CoinParameters& coin);

/// Dispatch on regime: `index` is k for FixedK, alpha for Alpha and beta for Beta.
cplx lambda_asymptotic(double index, int n, int s, const CoinParameters& coin, Regime regime);

struct SectorBound {
  double r = 0.0;              // exact inner radius r(n)
  double r_first_order = 0.0;  // 1 - (|a|^2 / n) log((1 + |a|) / (1 - |a|))
  double phi = 0.0;
};

SectorBound sector_bound(int n, const CoinParameters& coin);

/// Sector containment for nonzero eigenvalues: r(n) < |lambda| < 1 and
/// phi < |arg lambda| < pi - phi (lambda = 0 is always contained).
bool in_sector(cplx lambda, const SectorBound& bound);

/// Leading-order time after which (|lambda_k| / |lambda_1|)^t < epsilon.
double stabilization_time(int k, double epsilon, int n, const CoinParameters& coin);

}  // namespace qwalk
