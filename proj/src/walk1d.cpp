#include "qwalk/walk1d.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "qwalk/error.hpp"
#include "qwalk/kernels.hpp"

namespace qwalk {

WalkState1D::WalkState1D(int sites) : sites_(sites) {
  if (sites < 2) throw Error(ErrorKind::InvalidArgument, "lattice needs at least 2 sites");
  amps_.assign(2 * static_cast<std::size_t>(sites), cplx{});
}

WalkState1D WalkState1D::delta(int sites, int site, Component component) {
  WalkState1D s(sites);
  if (site < 1 || site > sites) {
    throw Error(ErrorKind::InvalidArgument, "site outside 1..n");
  }
  s.amps_[s.index(site, component)] = 1.0;
  return s;
}

double WalkState1D::norm_squared() const {
  double acc = 0.0;
  for (const cplx& z : amps_) acc += std::norm(z);
  return acc;
}

void WalkState1D::scale(double factor) {
  for (cplx& z : amps_) z *= factor;
}

StepOutcome apply_step(const WalkState1D& state, const CoinParameters& coin) {
  WalkState1D next(state.sites());
  const auto loss = kernels::walk_step(state.amplitudes(), next.amplitudes(), coin.a, coin.b);
  return {std::move(next), loss.left, loss.right};
}

Walker1D::Walker1D(WalkState1D initial, const CoinParameters& coin, bool record)
    : state_(std::move(initial)),
      scratch_(state_.sites()),
      coin_(coin),
      recording_(record),
      initial_norm_(state_.norm_squared()) {}

void Walker1D::step() {
  const auto loss =
      kernels::walk_step(state_.amplitudes(), scratch_.amplitudes(), coin_.a, coin_.b);
  std::swap(state_, scratch_);
  ++time_;
  record_.left_total += loss.left;
  record_.right_total += loss.right;
  if (recording_) record_.per_step.push_back({time_, loss.left, loss.right});
}

void Walker1D::advance(std::int64_t steps) {
  for (std::int64_t s = 0; s < steps; ++s) step();
}

Evolution evolve(WalkState1D state, const CoinParameters& coin, std::int64_t steps,
                 bool record) {
  if (steps < 0) throw Error(ErrorKind::InvalidArgument, "negative step count");
  Walker1D walker(std::move(state), coin, record);
  walker.advance(steps);
  return {walker.state(), walker.absorption()};
}

std::vector<double> site_probabilities(const WalkState1D& state) {
  std::vector<double> p(static_cast<std::size_t>(state.sites()));
  for (int j = 1; j <= state.sites(); ++j) {
    p[j - 1] = std::norm(state.right(j)) + std::norm(state.left(j));
  }
  return p;
}

std::vector<double> conditional_distribution(const WalkState1D& state) {
  auto p = site_probabilities(state);
  double total = 0.0;
  for (double v : p) total += v;
  if (!(total > 1e-300)) {
    throw Error(ErrorKind::VanishedState, "survival probability underflowed");
  }
  for (double& v : p) v /= total;
  return p;
}

double absorption_probability(int interior_sites, const CoinParameters& coin,
                              const AbsorptionOptions& options) {
  if (interior_sites < 2) throw Error(ErrorKind::InvalidArgument, "m must be >= 2");
  if (!(options.tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be positive");
  Walker1D walker(WalkState1D::delta(interior_sites, 1, Component::R), coin);
  while (walker.state().norm_squared() >= options.tol) {
    if (walker.time() >= options.step_cap) {
      std::ostringstream msg;
      msg << "residual norm above " << options.tol << " after " << options.step_cap << " steps";
      throw Error(ErrorKind::NoConvergence, msg.str());
    }
    walker.step();
  }
  return walker.absorption().left_total;
}

double bach_borisov_next(double p) { return (1.0 + 2.0 * p) / (2.0 + 2.0 * p); }

int absorption_index_offset(std::span<const double> p, int m_first) {
  int best = 0;
  double best_err = std::numeric_limits<double>::infinity();
  for (int offset = 0; offset <= 3; ++offset) {
    const int first_label = m_first + offset;
    if (first_label < 2) continue;
    double orbit = 0.5;  // label n = 2
    for (int label = 2; label < first_label; ++label) orbit = bach_borisov_next(orbit);
    double err = 0.0;
    for (double v : p) {
      err = std::max(err, std::abs(v - orbit));
      orbit = bach_borisov_next(orbit);
    }
    if (err < best_err) {
      best_err = err;
      best = offset;
    }
  }
  return best;
}

}  // namespace qwalk
