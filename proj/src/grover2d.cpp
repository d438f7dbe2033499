#include "qwalk/grover2d.hpp"

#include <Eigen/Dense>

#include <cmath>

#include "qwalk/error.hpp"
#include "qwalk/kernels.hpp"

namespace qwalk {

GroverState2D::GroverState2D(int x, int y) : x_(x), y_(y) {
  if (x < 4 || y < 4) throw Error(ErrorKind::InvalidArgument, "box must be at least 4x4");
  amps_.assign(static_cast<std::size_t>(x) * y * 4, cplx{});
}

GroverState2D GroverState2D::delta(int x, int y, int i, int j, Direction d) {
  GroverState2D s(x, y);
  if (i < 1 || i > x || j < 1 || j > y) throw Error(ErrorKind::InvalidArgument, "cell outside box");
  s.at(i, j, d) = 1.0;
  return s;
}

double GroverState2D::norm_squared() const {
  double acc = 0.0;
  for (const cplx& z : amps_) acc += std::norm(z);
  return acc;
}

void GroverState2D::scale(double factor) {
  for (cplx& z : amps_) z *= factor;
}

std::vector<double> GroverState2D::cell_probabilities() const {
  std::vector<double> p(amps_.size() / 4);
  for (std::size_t c = 0; c < p.size(); ++c) {
    p[c] = std::norm(amps_[4 * c]) + std::norm(amps_[4 * c + 1]) + std::norm(amps_[4 * c + 2]) +
           std::norm(amps_[4 * c + 3]);
  }
  return p;
}

std::array<std::array<double, 4>, 4> grover_coin() {
  std::array<std::array<double, 4>, 4> g{};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) g[r][c] = (r == c ? 0.5 - 1.0 : 0.5);
  }
  return g;
}

Step2DOutcome apply_step_2d(const GroverState2D& state) {
  GroverState2D next(state.x(), state.y());
  const double absorbed =
      kernels::grover_step(state.amplitudes(), next.amplitudes(), state.x(), state.y(), true);
  return {std::move(next), absorbed};
}

GroverState2D apply_step_2d_open(const GroverState2D& state) {
  GroverState2D next(state.x(), state.y());
  kernels::grover_step(state.amplitudes(), next.amplitudes(), state.x(), state.y(), false);
  return next;
}

double project_ring(GroverState2D& state) {
  double mass = 0.0;
  for (int i = 1; i <= state.x(); ++i) {
    for (int j = 1; j <= state.y(); ++j) {
      if (!state.on_ring(i, j)) continue;
      for (int d = 0; d < 4; ++d) {
        cplx& z = state.at(i, j, static_cast<Direction>(d));
        mass += std::norm(z);
        z = {};
      }
    }
  }
  return mass;
}

namespace {

constexpr std::array<std::array<int, 2>, 4> kShift{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};

bool ring_cell(int i, int j, int x, int y) { return i == 1 || j == 1 || i == x || j == y; }

// Null vector of (Q - I) restricted to the plaquette at (i, j). Rows are the
// 4x4 block of cells the plaquette can reach in one step, minus ring cells.
Eigen::VectorXd local_null_vector(int i, int j, int x, int y, double& sigma_min) {
  const auto g = grover_coin();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(64, 16);
  auto row = [](int di, int dj, int d) { return ((di + 1) + 4 * (dj + 1)) * 4 + d; };
  for (int c = 0; c < 4; ++c) {
    const int ci = PlaquetteVector::kCells[c][0];
    const int cj = PlaquetteVector::kCells[c][1];
    for (int din = 0; din < 4; ++din) {
      const int col = c * 4 + din;
      m(row(ci, cj, din), col) -= 1.0;
      for (int dout = 0; dout < 4; ++dout) {
        const int ti = ci + kShift[dout][0];
        const int tj = cj + kShift[dout][1];
        if (ring_cell(i + ti, j + tj, x, y)) continue;
        m(row(ti, tj, dout), col) += g[dout][din];
      }
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  sigma_min = svd.singularValues()(15);
  return svd.matrixV().col(15);
}

}  // namespace

double plaquette_residual(const PlaquetteVector& v, int x, int y) {
  // Window of cells i-2..i+3, j-2..j+3 stepped without projection, then the
  // true ring cells are cleared.
  constexpr int w = 6;
  std::vector<cplx> in(w * w * 4), out(w * w * 4);
  auto idx = [](int wi, int wj, int d) { return (static_cast<std::size_t>(wi) * w + wj) * 4 + d; };
  for (int c = 0; c < 4; ++c) {
    for (int d = 0; d < 4; ++d) {
      in[idx(2 + PlaquetteVector::kCells[c][0], 2 + PlaquetteVector::kCells[c][1], d)] =
          v.amps[c * 4 + d];
    }
  }
  kernels::grover_step_serial(in, out, w, w, false);
  double acc = 0.0;
  for (int wi = 0; wi < w; ++wi) {
    for (int wj = 0; wj < w; ++wj) {
      const int gi = v.i - 2 + wi;
      const int gj = v.j - 2 + wj;
      const bool inside = gi >= 1 && gj >= 1 && gi <= x && gj <= y;
      for (int d = 0; d < 4; ++d) {
        const cplx q = (inside && !ring_cell(gi, gj, x, y)) ? out[idx(wi, wj, d)] : cplx{};
        acc += std::norm(q - v.lambda * in[idx(wi, wj, d)]);
      }
    }
  }
  return std::sqrt(acc);
}

std::vector<PlaquetteVector> localized_eigenvectors(int x, int y) {
  if (x < 6 || y < 6) throw Error(ErrorKind::InvalidArgument, "box must be at least 6x6");
  std::vector<PlaquetteVector> out;
  out.reserve(static_cast<std::size_t>(x - 3) * (y - 3));
  for (int i = 2; i <= x - 2; ++i) {
    for (int j = 2; j <= y - 2; ++j) {
      double sigma = 0.0;
      const Eigen::VectorXd nv = local_null_vector(i, j, x, y, sigma);
      PlaquetteVector v{i, j, {}, 1.0};
      int lead = 0;
      for (int k = 1; k < 16; ++k) {
        if (std::abs(nv(k)) > std::abs(nv(lead)) + 1e-12) lead = k;
      }
      const double sign = nv(lead) < 0 ? -1.0 : 1.0;
      const double norm = nv.norm();
      for (int k = 0; k < 16; ++k) v.amps[k] = sign * nv(k) / norm;
      if (sigma > 1e-12 || plaquette_residual(v, x, y) > 1e-12) {
        throw Error(ErrorKind::NullSpaceEmpty, "no lambda = 1 vector on plaquette (" +
                                                   std::to_string(i) + ", " + std::to_string(j) +
                                                   ")");
      }
      out.push_back(v);
    }
  }
  return out;
}

PlaquetteVector parity_partner(const PlaquetteVector& v) {
  PlaquetteVector w = v;
  w.lambda = -v.lambda;
  for (int c = 0; c < 4; ++c) {
    const int parity = (v.i + v.j + PlaquetteVector::kCells[c][0] + PlaquetteVector::kCells[c][1]) & 1;
    if (parity) {
      for (int d = 0; d < 4; ++d) w.amps[c * 4 + d] = -w.amps[c * 4 + d];
    }
  }
  return w;
}

std::vector<PlaquetteVector> parity_partners(std::span<const PlaquetteVector> vectors) {
  std::vector<PlaquetteVector> out;
  out.reserve(vectors.size());
  for (const auto& v : vectors) out.push_back(parity_partner(v));
  return out;
}

void add_plaquette(GroverState2D& state, const PlaquetteVector& v, cplx coeff) {
  for (int c = 0; c < 4; ++c) {
    for (int d = 0; d < 4; ++d) {
      state.at(v.i + PlaquetteVector::kCells[c][0], v.j + PlaquetteVector::kCells[c][1],
               static_cast<Direction>(d)) += coeff * v.amps[c * 4 + d];
    }
  }
}

cplx plaquette_overlap(const PlaquetteVector& v, const GroverState2D& state) {
  cplx acc{};
  for (int c = 0; c < 4; ++c) {
    for (int d = 0; d < 4; ++d) {
      acc += std::conj(v.amps[c * 4 + d]) *
             state.at(v.i + PlaquetteVector::kCells[c][0], v.j + PlaquetteVector::kCells[c][1],
                      static_cast<Direction>(d));
    }
  }
  return acc;
}

namespace {

cplx pair_overlap(const PlaquetteVector& a, const PlaquetteVector& b) {
  cplx acc{};
  for (int ca = 0; ca < 4; ++ca) {
    const int ai = a.i + PlaquetteVector::kCells[ca][0];
    const int aj = a.j + PlaquetteVector::kCells[ca][1];
    for (int cb = 0; cb < 4; ++cb) {
      if (b.i + PlaquetteVector::kCells[cb][0] != ai || b.j + PlaquetteVector::kCells[cb][1] != aj) {
        continue;
      }
      for (int d = 0; d < 4; ++d) acc += std::conj(a.amps[ca * 4 + d]) * b.amps[cb * 4 + d];
    }
  }
  return acc;
}

// Sparse Hermitian Gram matrix: only plaquettes within one cell overlap.
struct Gram {
  std::vector<std::vector<std::pair<std::size_t, cplx>>> rows;

  explicit Gram(std::span<const PlaquetteVector> vs, int x, int y) : rows(vs.size()) {
    std::vector<long> slot(static_cast<std::size_t>(x + 2) * (y + 2), -1);
    auto key = [y](int i, int j) { return static_cast<std::size_t>(i) * (y + 2) + j; };
    for (std::size_t k = 0; k < vs.size(); ++k) {
      if (vs[k].i < 1 || vs[k].j < 1 || vs[k].i + 1 > x || vs[k].j + 1 > y) {
        throw Error(ErrorKind::InvalidArgument, "plaquette outside box");
      }
      slot[key(vs[k].i, vs[k].j)] = static_cast<long>(k);
    }
    for (std::size_t k = 0; k < vs.size(); ++k) {
      for (int di = -1; di <= 1; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          const int ni = vs[k].i + di;
          const int nj = vs[k].j + dj;
          if (ni < 1 || nj < 1 || ni > x || nj > y) continue;
          const long other = slot[key(ni, nj)];
          if (other < 0) continue;
          const cplx g = pair_overlap(vs[k], vs[other]);
          if (g != cplx{}) rows[k].push_back({static_cast<std::size_t>(other), g});
        }
      }
    }
  }

  void apply(const std::vector<cplx>& in, std::vector<cplx>& out) const {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      cplx acc{};
      for (const auto& [c, g] : rows[r]) acc += g * in[c];
      out[r] = acc;
    }
  }
};

double dot_re(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += (std::conj(a[k]) * b[k]).real();
  return acc;
}

// Conjugate gradients on G c = rhs from c = 0.
std::vector<cplx> solve_gram(const Gram& g, const std::vector<cplx>& rhs) {
  const std::size_t n = rhs.size();
  std::vector<cplx> c(n), r = rhs, p = rhs, gp(n);
  double rr = dot_re(r, r);
  const double stop = 1e-24 * std::max(rr, 1e-300);
  const std::size_t cap = 10 * n + 100;
  for (std::size_t it = 0; it < cap && rr > stop; ++it) {
    g.apply(p, gp);
    const double pgp = dot_re(p, gp);
    if (!(pgp > 0.0)) break;
    const double alpha = rr / pgp;
    for (std::size_t k = 0; k < n; ++k) {
      c[k] += alpha * p[k];
      r[k] -= alpha * gp[k];
    }
    const double rr_new = dot_re(r, r);
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t k = 0; k < n; ++k) p[k] = r[k] + beta * p[k];
  }
  return c;
}

}  // namespace

namespace {

// Removes the orthogonal projection onto span(vectors) in place.
void project_out(GroverState2D& psi, std::span<const PlaquetteVector> vectors) {
  for (const auto& v : vectors) {
    if (v.lambda != 1.0 && v.lambda != -1.0) {
      throw Error(ErrorKind::InvalidArgument, "plaquette eigenvalue must be +1 or -1");
    }
  }
  for (const double lambda : {1.0, -1.0}) {
    std::vector<PlaquetteVector> family;
    for (const auto& v : vectors) {
      if (v.lambda == lambda) family.push_back(v);
    }
    if (family.empty()) continue;
    const Gram gram(family, psi.x(), psi.y());
    // A second pass removes what the first solve left behind.
    for (int pass = 0; pass < 2; ++pass) {
      std::vector<cplx> rhs(family.size());
      for (std::size_t k = 0; k < family.size(); ++k) rhs[k] = plaquette_overlap(family[k], psi);
      const auto c = solve_gram(gram, rhs);
      for (std::size_t k = 0; k < family.size(); ++k) {
        if (c[k] != cplx{}) add_plaquette(psi, family[k], -c[k]);
      }
    }
  }
}

}  // namespace

GroverState2D orthogonalize_initial(const GroverState2D& psi0,
                                    std::span<const PlaquetteVector> vectors) {
  const double n0 = psi0.norm_squared();
  if (!(n0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "initial state is zero");
  GroverState2D psi = psi0;
  project_out(psi, vectors);
  const double rest = psi.norm_squared();
  if (std::sqrt(rest / n0) < 1e-12) {
    throw Error(ErrorKind::FullyLocalized, "initial state lies in the localized span");
  }
  psi.scale(1.0 / std::sqrt(rest));
  return psi;
}

EntropySeries entropy_series_2d(const GroverState2D& phi0, std::int64_t t_max,
                                std::int64_t stride) {
  if (t_max < 0 || stride < 1) throw Error(ErrorKind::InvalidArgument, "bad scan range");
  if (std::abs(phi0.norm_squared() - 1.0) > 1e-9) {
    throw Error(ErrorKind::InvalidArgument, "initial state must have unit norm");
  }
  GroverState2D cur = phi0;
  GroverState2D nxt(phi0.x(), phi0.y());
  EntropySeries series;
  for (std::int64_t t = 0;; ++t) {
    if (t % stride == 0) {
      auto p = cur.cell_probabilities();
      double total = 0.0;
      for (double v : p) total += v;
      if (!(total > 1e-300)) throw Error(ErrorKind::VanishedState, "surviving mass underflowed");
      for (double& v : p) v /= total;
      series.push(t, shannon_entropy(p), total);
    }
    if (t + 1 > t_max) break;
    kernels::grover_step(cur.amplitudes(), nxt.amplitudes(), cur.x(), cur.y(), true);
    std::swap(cur, nxt);
  }
  return series;
}

namespace {

std::vector<double> normalized_cells(const GroverState2D& s) {
  auto p = s.cell_probabilities();
  double total = 0.0;
  for (double v : p) total += v;
  if (!(total > 1e-300)) throw Error(ErrorKind::VanishedState, "surviving mass underflowed");
  for (double& v : p) v /= total;
  return p;
}

double l1(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += std::abs(a[k] - b[k]);
  return acc;
}

}  // namespace

StableDistribution stable_distribution_2d(const GroverState2D& phi0,
                                          std::span<const PlaquetteVector> localized,
                                          const StableOptions& options) {
  GroverState2D cur = phi0;
  cur.scale(1.0 / std::sqrt(cur.norm_squared()));
  GroverState2D nxt(cur.x(), cur.y());
  // Distributions at t - 2 and t - 1: the walk alternates between the two
  // sublattices, so convergence is judged two steps apart.
  auto older = normalized_cells(cur);
  std::vector<double> old;
  int held = 0;
  for (std::int64_t t = 1; t <= options.step_cap; ++t) {
    kernels::grover_step(cur.amplitudes(), nxt.amplitudes(), cur.x(), cur.y(), true);
    std::swap(cur, nxt);
    if (options.reproject_every > 0 && t % options.reproject_every == 0) {
      project_out(cur, localized);
    }
    const double m = cur.norm_squared();
    if (!(m > 1e-300)) throw Error(ErrorKind::VanishedState, "state vanished");
    cur.scale(1.0 / std::sqrt(m));
    auto dist = normalized_cells(cur);
    if (t >= 2) {
      held = l1(dist, older) < options.tol ? held + 1 : 0;
      if (held >= options.hold) {
        std::vector<double> avg(dist.size());
        for (std::size_t k = 0; k < avg.size(); ++k) avg[k] = 0.5 * (dist[k] + old[k]);
        return {std::move(avg), t};
      }
      older = std::move(old);
    }
    old = std::move(dist);
  }
  throw Error(ErrorKind::NoConvergence, "stable distribution not reached within the step cap");
}

}  // namespace qwalk
