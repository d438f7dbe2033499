#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qwalk/coin.hpp"

namespace qwalk {

/// Square row-major complex matrix.
class CMatrix {
 public:
  CMatrix() = default;
  explicit CMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

  static CMatrix identity(std::size_t dim);

  std::size_t dim() const { return dim_; }
  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
  cplx operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }
  std::span<cplx> data() { return data_; }
  std::span<const cplx> data() const { return data_; }

 private:
  std::size_t dim_ = 0;
  std::vector<cplx> data_;
};

/// Row-major real matrix with explicit shape.
struct RMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  RMatrix() = default;
  RMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}
  double& operator()(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

CMatrix multiply(const CMatrix& a, const CMatrix& b);

/// Explicit 2n x 2n absorbing walk operator (block tridiagonal, U+ below and
/// U- above the block diagonal).
CMatrix walk_operator_dense(int n, const CoinParameters& coin);

/// m^power by repeated squaring.
CMatrix matrix_power(const CMatrix& m, std::int64_t power);

}  // namespace qwalk
