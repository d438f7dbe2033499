#include "qwalk/charpoly.hpp"

#include <algorithm>
#include <cmath>

#include "qwalk/error.hpp"

namespace qwalk {

namespace {

constexpr double kRescaleAbove = 1e150;

// Runs x_{m+1} = c1 x_m - c0 x_{m-1} from (x_0, x_1) for `steps` steps with a
// shared binary exponent; returns (x_{steps-1}, x_steps) scaled alike.
struct ScaledPair {
  cplx prev;
  cplx curr;
  long exponent = 0;
};

ScaledPair run_recurrence(cplx x0, cplx x1, cplx c1, cplx c0, int steps) {
  ScaledPair st{x0, x1, 0};
  for (int m = 1; m < steps; ++m) {
    const cplx next = c1 * st.curr - c0 * st.prev;
    st.prev = st.curr;
    st.curr = next;
    const double mag = std::max(std::abs(st.curr), std::abs(st.prev));
    if (mag > kRescaleAbove) {
      int e = 0;
      std::frexp(mag, &e);
      const double f = std::ldexp(1.0, -e);
      st.prev *= f;
      st.curr *= f;
      st.exponent += e;
    }
  }
  return st;
}

}  // namespace

cplx ScaledComplex::value() const {
  return {std::ldexp(mantissa.real(), static_cast<int>(exponent)),
          std::ldexp(mantissa.imag(), static_cast<int>(exponent))};
}

OmegaPair omega(cplx lambda, const CoinParameters& coin) {
  const cplx l2 = lambda * lambda;
  const cplx s = l2 + 1.0;
  const cplx root = std::sqrt(s * s - 4.0 * std::norm(coin.a) * l2);
  return {0.5 * (s + root), 0.5 * (s - root)};
}

std::vector<cplx> f_sequence(cplx lambda, int count, const CoinParameters& coin) {
  if (count < 0) throw Error(ErrorKind::InvalidArgument, "negative length");
  std::vector<cplx> f(static_cast<std::size_t>(count) + 1);
  f[0] = 0.0;
  if (count == 0) return f;
  const OmegaPair w = omega(lambda, coin);
  f[1] = w.plus - w.minus;
  const cplx l2 = lambda * lambda;
  const cplx c1 = l2 + 1.0;
  const cplx c0 = std::norm(coin.a) * l2;
  for (int m = 2; m <= count; ++m) f[m] = c1 * f[m - 1] - c0 * f[m - 2];
  return f;
}

ScaledComplex charpoly_eval_scaled(cplx lambda, int n, const CoinParameters& coin) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "negative size");
  const cplx l2 = lambda * lambda;
  if (n == 0) return {1.0, 0};
  if (n == 1) return {l2, 0};
  const auto st = run_recurrence(1.0, l2, l2 + 1.0, std::norm(coin.a) * l2, n);
  return {st.curr, st.exponent};
}

cplx charpoly_eval(cplx lambda, int n, const CoinParameters& coin) {
  return charpoly_eval_scaled(lambda, n, coin).value();
}

cplx charpoly_closed(cplx lambda, int n, const CoinParameters& coin) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "closed form needs n >= 1");
  const OmegaPair w = omega(lambda, coin);
  const cplx f1 = w.plus - w.minus;
  // F_1 is the square root of the discriminant, so rounding in lambda alone
  // leaves |F_1| near 1e-8 at a branch point; test the discriminant instead.
  const double scale = std::max(1.0, std::norm(lambda * lambda + 1.0));
  if (std::norm(f1) < 1e-14 * scale) {
    throw Error(ErrorKind::BranchDegenerate, "F_1(lambda) vanishes; use the recursion");
  }
  const cplx l2 = lambda * lambda;
  // (F_{n-1}, F_n) from (F_0, F_1).
  const auto st = run_recurrence(0.0, f1, l2 + 1.0, std::norm(coin.a) * l2, n);
  const cplx bracket = st.curr - std::norm(coin.a) * st.prev;
  const ScaledComplex out{l2 / f1 * bracket, st.exponent};
  return out.value();
}

CharPolyEvaluation evaluate_charpoly(cplx lambda, int n, const CoinParameters& coin) {
  const OmegaPair w = omega(lambda, coin);
  return {lambda, n, charpoly_eval(lambda, n, coin), charpoly_closed(lambda, n, coin), w.plus,
          w.minus};
}

}  // namespace qwalk
