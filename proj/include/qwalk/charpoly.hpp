#pragma once

#include <complex>
#include <vector>

#include "qwalk/coin.hpp"

namespace qwalk {

/// A complex value stored as mantissa * 2^exponent so that long recurrences
/// do not overflow.
struct ScaledComplex {
  cplx mantissa;
  long exponent = 0;

  cplx value() const;  // may overflow to inf for huge exponents
};

/// omega_pm(lambda) = ((lambda^2 + 1) +- sqrt((lambda^2 + 1)^2 - 4|a|^2 lambda^2)) / 2,
/// principal square root.
struct OmegaPair {
  cplx plus;
  cplx minus;
};
OmegaPair omega(cplx lambda, const CoinParameters& coin);

/// F_0..F_count with F_m = omega_+^m - omega_-^m, generated by the three-term
/// recurrence F_{m+2} = (lambda^2 + 1) F_{m+1} - |a|^2 lambda^2 F_m.
std::vector<cplx> f_sequence(cplx lambda, int count, const CoinParameters& coin);

/// p_n(lambda) = det(lambda I - Q_n) by the recursion
/// p_{n+1} = (lambda^2 + 1) p_n - |a|^2 lambda^2 p_{n-1}, p_0 = 1, p_1 = lambda^2.
cplx charpoly_eval(cplx lambda, int n, const CoinParameters& coin);
ScaledComplex charpoly_eval_scaled(cplx lambda, int n, const CoinParameters& coin);

/// Closed form lambda^2 / F_1 * (F_n - |a|^2 F_{n-1}). Throws BranchDegenerate
/// when |F_1(lambda)|^2 < 1e-14 max(1, |lambda^2 + 1|^2).
cplx charpoly_closed(cplx lambda, int n, const CoinParameters& coin);

struct CharPolyEvaluation {
  cplx lambda;
  int n;
  cplx value_recursive;
  cplx value_closed;
  cplx omega_plus;
  cplx omega_minus;
};

CharPolyEvaluation evaluate_charpoly(cplx lambda, int n, const CoinParameters& coin);

}  // namespace qwalk
