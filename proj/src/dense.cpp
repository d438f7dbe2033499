#include "qwalk/dense.hpp"

#include "qwalk/error.hpp"
#include "qwalk/kernels.hpp"

namespace qwalk {

CMatrix CMatrix::identity(std::size_t dim) {
  CMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix multiply(const CMatrix& a, const CMatrix& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::InvalidArgument, "dimension mismatch");
  CMatrix c(a.dim());
  kernels::matmul(a.data(), b.data(), c.data(), a.dim());
  return c;
}

CMatrix walk_operator_dense(int n, const CoinParameters& coin) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "n must be >= 2");
  CMatrix q(2 * static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const std::size_t r = 2 * static_cast<std::size_t>(j);
    if (j > 0) {
      q(r, r - 2) = coin.a;
      q(r, r - 1) = coin.b;
    }
    if (j + 1 < n) {
      q(r + 1, r + 2) = -std::conj(coin.b);
      q(r + 1, r + 3) = std::conj(coin.a);
    }
  }
  return q;
}

CMatrix matrix_power(const CMatrix& m, std::int64_t power) {
  if (power < 0) throw Error(ErrorKind::InvalidArgument, "negative power");
  CMatrix result = CMatrix::identity(m.dim());
  if (power == 0) return result;
  CMatrix base = m;
  bool first = true;
  while (power > 0) {
    if (power & 1) {
      result = first ? base : multiply(result, base);
      first = false;
    }
    power >>= 1;
    if (power > 0) base = multiply(base, base);
  }
  return result;
}

}  // namespace qwalk
