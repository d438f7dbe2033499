#include "qwalk/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cassert>
#include <vector>

namespace qwalk::kernels {

namespace {

int g_thread_limit = 0;

int threads() { return g_thread_limit > 0 ? g_thread_limit : omp_get_max_threads(); }

// Below these sizes the fork/join cost dominates.
constexpr std::size_t kWalkParallelMin = 1 << 14;
constexpr std::size_t kGridParallelMin = 1 << 12;

inline cplx mul(cplx x, cplx y) {
  return {x.real() * y.real() - x.imag() * y.imag(), x.real() * y.imag() + x.imag() * y.real()};
}

inline void walk_site(const cplx* in, cplx* out, std::size_t j, std::size_t n, cplx a, cplx b,
                      cplx mbc, cplx ac) {
  out[2 * j] = j > 0 ? mul(a, in[2 * j - 2]) + mul(b, in[2 * j - 1]) : cplx{};
  out[2 * j + 1] = j + 1 < n ? mul(mbc, in[2 * j + 2]) + mul(ac, in[2 * j + 3]) : cplx{};
}

EdgeLoss edge_loss(const cplx* in, std::size_t n, cplx a, cplx b, cplx mbc, cplx ac) {
  EdgeLoss loss;
  loss.left = std::norm(mul(mbc, in[0]) + mul(ac, in[1]));
  loss.right = std::norm(mul(a, in[2 * n - 2]) + mul(b, in[2 * n - 1]));
  return loss;
}

inline bool on_ring(int i, int j, int nx, int ny) {
  return i == 0 || j == 0 || i == nx - 1 || j == ny - 1;
}

// Coined amplitude of cell (i, j) in direction d, with the ring treated as
// empty when `absorbing` (pre-projection).
inline cplx coined(const cplx* in, int i, int j, int d, int nx, int ny, bool absorbing) {
  if (i < 0 || j < 0 || i >= nx || j >= ny) return {};
  if (absorbing && on_ring(i, j, nx, ny)) return {};
  const cplx* c = in + (static_cast<std::size_t>(i) * ny + j) * 4;
  const cplx half = 0.5 * (c[0] + c[1] + c[2] + c[3]);
  return half - c[d];
}

inline void grover_cell(const cplx* in, cplx* out, int i, int j, int nx, int ny,
                        bool absorbing) {
  cplx* o = out + (static_cast<std::size_t>(i) * ny + j) * 4;
  o[0] = coined(in, i - 1, j, 0, nx, ny, absorbing);  // E arrives from the west
  o[1] = coined(in, i + 1, j, 1, nx, ny, absorbing);  // W arrives from the east
  o[2] = coined(in, i, j - 1, 2, nx, ny, absorbing);  // N arrives from the south
  o[3] = coined(in, i, j + 1, 3, nx, ny, absorbing);  // S arrives from the north
}

double ring_mass_in(const cplx* in, int nx, int ny) {
  double mass = 0.0;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      if (!on_ring(i, j, nx, ny)) continue;
      const cplx* c = in + (static_cast<std::size_t>(i) * ny + j) * 4;
      for (int d = 0; d < 4; ++d) mass += std::norm(c[d]);
    }
  }
  return mass;
}

// Zeroes the ring of `out` and returns its squared norm (fixed traversal order).
double absorb_ring(cplx* out, int nx, int ny) {
  double mass = 0.0;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      if (!on_ring(i, j, nx, ny)) continue;
      cplx* c = out + (static_cast<std::size_t>(i) * ny + j) * 4;
      for (int d = 0; d < 4; ++d) {
        mass += std::norm(c[d]);
        c[d] = {};
      }
    }
  }
  return mass;
}

constexpr std::size_t kTile = 64;

// C[rows r0..r1) = A * B with i-k-j ordering over k tiles.
void matmul_rows(const cplx* a, const cplx* b, cplx* c, std::size_t dim, std::size_t r0,
                 std::size_t r1) {
  const double* bd = reinterpret_cast<const double*>(b);
  for (std::size_t i = r0; i < r1; ++i) {
    double* ci = reinterpret_cast<double*>(c + i * dim);
    std::fill(ci, ci + 2 * dim, 0.0);
  }
  for (std::size_t k0 = 0; k0 < dim; k0 += kTile) {
    const std::size_t k1 = std::min(dim, k0 + kTile);
    for (std::size_t i = r0; i < r1; ++i) {
      double* ci = reinterpret_cast<double*>(c + i * dim);
      for (std::size_t k = k0; k < k1; ++k) {
        const double ar = a[i * dim + k].real();
        const double ai = a[i * dim + k].imag();
        if (ar == 0.0 && ai == 0.0) continue;
        const double* bk = bd + 2 * k * dim;
        for (std::size_t j = 0; j < 2 * dim; j += 2) {
          const double br = bk[j];
          const double bi = bk[j + 1];
          ci[j] += ar * br - ai * bi;
          ci[j + 1] += ar * bi + ai * br;
        }
      }
    }
  }
}

}  // namespace

void set_thread_limit(int t) { g_thread_limit = std::max(0, t); }
int thread_limit() { return threads(); }

EdgeLoss walk_step_serial(std::span<const cplx> in, std::span<cplx> out, cplx a, cplx b) {
  assert(in.size() == out.size() && in.size() % 2 == 0 && in.size() >= 4);
  const std::size_t n = in.size() / 2;
  const cplx mbc = -std::conj(b);
  const cplx ac = std::conj(a);
  for (std::size_t j = 0; j < n; ++j) walk_site(in.data(), out.data(), j, n, a, b, mbc, ac);
  return edge_loss(in.data(), n, a, b, mbc, ac);
}

EdgeLoss walk_step(std::span<const cplx> in, std::span<cplx> out, cplx a, cplx b) {
  assert(in.size() == out.size() && in.size() % 2 == 0 && in.size() >= 4);
  const std::size_t n = in.size() / 2;
  const cplx mbc = -std::conj(b);
  const cplx ac = std::conj(a);
  const cplx* src = in.data();
  cplx* dst = out.data();
  const std::ptrdiff_t sites = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) num_threads(threads()) if (n >= kWalkParallelMin)
  for (std::ptrdiff_t j = 0; j < sites; ++j) {
    walk_site(src, dst, static_cast<std::size_t>(j), n, a, b, mbc, ac);
  }
  return edge_loss(src, n, a, b, mbc, ac);
}

double grover_step_serial(std::span<const cplx> in, std::span<cplx> out, int nx, int ny,
                          bool absorbing) {
  assert(in.size() == out.size() && in.size() == static_cast<std::size_t>(nx) * ny * 4);
  double absorbed = absorbing ? ring_mass_in(in.data(), nx, ny) : 0.0;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) grover_cell(in.data(), out.data(), i, j, nx, ny, absorbing);
  }
  if (absorbing) absorbed += absorb_ring(out.data(), nx, ny);
  return absorbed;
}

double grover_step(std::span<const cplx> in, std::span<cplx> out, int nx, int ny,
                   bool absorbing) {
  assert(in.size() == out.size() && in.size() == static_cast<std::size_t>(nx) * ny * 4);
  double absorbed = absorbing ? ring_mass_in(in.data(), nx, ny) : 0.0;
  const cplx* src = in.data();
  cplx* dst = out.data();
  const bool big = static_cast<std::size_t>(nx) * ny >= kGridParallelMin;
#pragma omp parallel for schedule(static) num_threads(threads()) if (big)
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) grover_cell(src, dst, i, j, nx, ny, absorbing);
  }
  if (absorbing) absorbed += absorb_ring(dst, nx, ny);
  return absorbed;
}

void matmul_serial(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> c,
                   std::size_t dim) {
  assert(a.size() == dim * dim && b.size() == dim * dim && c.size() == dim * dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      cplx acc{};
      for (std::size_t k = 0; k < dim; ++k) acc += mul(a[i * dim + k], b[k * dim + j]);
      c[i * dim + j] = acc;
    }
  }
}

void matmul(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> c,
            std::size_t dim) {
  assert(a.size() == dim * dim && b.size() == dim * dim && c.size() == dim * dim);
  const std::ptrdiff_t blocks = static_cast<std::ptrdiff_t>((dim + 15) / 16);
#pragma omp parallel for schedule(dynamic) num_threads(threads()) if (dim >= 64)
  for (std::ptrdiff_t blk = 0; blk < blocks; ++blk) {
    const std::size_t r0 = static_cast<std::size_t>(blk) * 16;
    matmul_rows(a.data(), b.data(), c.data(), dim, r0, std::min(dim, r0 + 16));
  }
}

}  // namespace qwalk::kernels
