#pragma once

#include <complex>

namespace qwalk {

using cplx = std::complex<double>;

/// Validated 2x2 coin parameters (a, b) of the one-dimensional walk.
///
/// The walk uses U+ = [[a, b], [0, 0]] and U- = [[0, 0], [-conj(b), conj(a)]].
/// Derived constants: y = |a|/|b| and phi with e^{i phi} = |a| + i|b|.
struct CoinParameters {
  cplx a;
  cplx b;
  double y = 0.0;
  double phi = 0.0;

  double abs_a() const { return std::abs(a); }
  double abs_b() const { return std::abs(b); }
};

/// Validates |a|^2 + |b|^2 = 1 (to 1e-9) and renormalizes exactly.
/// Throws Error{NormViolation} or Error{DegenerateCoin}.
CoinParameters build_coin(cplx a, cplx b);

CoinParameters hadamard_coin();

}  // namespace qwalk
