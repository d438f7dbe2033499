#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "qwalk/coin.hpp"

namespace qwalk {

enum class Component { R, L };

/// Amplitudes of the absorbing walk on sites 1..n, interleaved per site:
/// entry 2(j-1) is psi_R(j) and entry 2(j-1)+1 is psi_L(j).
class WalkState1D {
 public:
  explicit WalkState1D(int sites);

  static WalkState1D delta(int sites, int site, Component component);

  int sites() const { return sites_; }
  std::span<cplx> amplitudes() { return amps_; }
  std::span<const cplx> amplitudes() const { return amps_; }

  // Sites are 1-based.
  cplx& right(int site) { return amps_[index(site, Component::R)]; }
  cplx& left(int site) { return amps_[index(site, Component::L)]; }
  cplx right(int site) const { return amps_[index(site, Component::R)]; }
  cplx left(int site) const { return amps_[index(site, Component::L)]; }

  double norm_squared() const;
  void scale(double factor);

  std::size_t index(int site, Component c) const {
    return 2 * static_cast<std::size_t>(site - 1) + (c == Component::L ? 1 : 0);
  }

 private:
  int sites_;
  std::vector<cplx> amps_;
};

struct AbsorptionEvent {
  std::int64_t t;
  double left;
  double right;
};

struct AbsorptionRecord {
  double left_total = 0.0;
  double right_total = 0.0;
  std::vector<AbsorptionEvent> per_step;  // filled only when recording
};

struct StepOutcome {
  WalkState1D state;
  double left_increment;
  double right_increment;
};

StepOutcome apply_step(const WalkState1D& state, const CoinParameters& coin);

/// Stateful stepping with a reusable scratch buffer; the building block for
/// evolve() and the entropy scans.
class Walker1D {
 public:
  Walker1D(WalkState1D initial, const CoinParameters& coin, bool record = false);

  void step();
  void advance(std::int64_t steps);

  const WalkState1D& state() const { return state_; }
  const AbsorptionRecord& absorption() const { return record_; }
  std::int64_t time() const { return time_; }
  double initial_norm_squared() const { return initial_norm_; }

 private:
  WalkState1D state_;
  WalkState1D scratch_;
  CoinParameters coin_;
  AbsorptionRecord record_;
  bool recording_;
  std::int64_t time_ = 0;
  double initial_norm_;
};

struct Evolution {
  WalkState1D state;
  AbsorptionRecord record;
};

Evolution evolve(WalkState1D state, const CoinParameters& coin, std::int64_t steps,
                 bool record = false);

/// Unnormalized site probabilities |psi_R(j)|^2 + |psi_L(j)|^2.
std::vector<double> site_probabilities(const WalkState1D& state);

/// Site distribution conditioned on survival. Throws VanishedState when the
/// squared norm is below 1e-300.
std::vector<double> conditional_distribution(const WalkState1D& state);

struct AbsorptionOptions {
  double tol = 1e-10;
  std::int64_t step_cap = 10'000'000;
};

/// Probability of absorption past the left edge for a walker started in the
/// R component of site 1 of an m-site lattice. Iterates until the surviving
/// squared norm drops below tol; throws NoConvergence past the step cap.
double absorption_probability(int interior_sites, const CoinParameters& coin,
                              const AbsorptionOptions& options = {});

/// Bach-Borisov map p -> (1 + 2p) / (2 + 2p).
double bach_borisov_next(double p);

/// Index shift between our lattice size m and the classical two-boundary
/// labelling n (absorbers at 0 and n, start at 1). `p` holds simulated
/// values for m = m_first, m_first + 1, ...; the returned offset d is the
/// candidate in [0, 3] for which p(m) matches the Bach-Borisov orbit started
/// from p_2 = 1/2 at label n = m + d (best L-infinity fit).
int absorption_index_offset(std::span<const double> p, int m_first);

}  // namespace qwalk
