#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "qwalk/coin.hpp"
#include "qwalk/entropy.hpp"

namespace qwalk {

enum class Direction { E = 0, W = 1, N = 2, S = 3 };

/// Amplitudes on an x-by-y box, cells (i, j) 1-based, four directions per
/// cell. Cells with i in {1, x} or j in {1, y} form the absorbing ring.
class GroverState2D {
 public:
  GroverState2D(int x, int y);

  static GroverState2D delta(int x, int y, int i, int j, Direction d);

  int x() const { return x_; }
  int y() const { return y_; }
  std::span<cplx> amplitudes() { return amps_; }
  std::span<const cplx> amplitudes() const { return amps_; }

  std::size_t index(int i, int j, Direction d) const {
    return (static_cast<std::size_t>(i - 1) * y_ + (j - 1)) * 4 + static_cast<std::size_t>(d);
  }
  cplx& at(int i, int j, Direction d) { return amps_[index(i, j, d)]; }
  cplx at(int i, int j, Direction d) const { return amps_[index(i, j, d)]; }

  bool on_ring(int i, int j) const { return i == 1 || j == 1 || i == x_ || j == y_; }

  double norm_squared() const;
  void scale(double factor);

  /// Unnormalized per-cell mass, row-major over (i, j).
  std::vector<double> cell_probabilities() const;

 private:
  int x_;
  int y_;
  std::vector<cplx> amps_;
};

/// G4 = (1/2) ones - I.
std::array<std::array<double, 4>, 4> grover_coin();

struct Step2DOutcome {
  GroverState2D state;
  double absorbed;
};

/// Coin, moving shift, ring projection. The ring is also cleared on input, so
/// any mass sitting there counts as absorbed.
Step2DOutcome apply_step_2d(const GroverState2D& state);

/// Unitary step on the box with nothing projected (amplitude leaving the box
/// is lost); used to check the bulk dynamics.
GroverState2D apply_step_2d_open(const GroverState2D& state);

/// Zeroes the ring in place and returns the removed squared norm.
double project_ring(GroverState2D& state);

/// Eigenvector with eigenvalue +1 or -1 supported on the 2x2 block of cells
/// (i..i+1, j..j+1). Amplitudes are ordered cell-major over
/// (i, j), (i+1, j), (i, j+1), (i+1, j+1), then by direction.
struct PlaquetteVector {
  int i;
  int j;
  std::array<cplx, 16> amps;
  double lambda = 1.0;

  static constexpr std::array<std::array<int, 2>, 4> kCells{{{0, 0}, {1, 0}, {0, 1}, {1, 1}}};
};

/// One unit vector per anchor i in 2..x-2, j in 2..y-2, each checked against
/// the full operator to residual 1e-12 (NullSpaceEmpty otherwise).
std::vector<PlaquetteVector> localized_eigenvectors(int x, int y);

/// The shift flips the parity of i + j, so (-1)^(i+j) v is an eigenvector
/// with the opposite eigenvalue.
PlaquetteVector parity_partner(const PlaquetteVector& v);
std::vector<PlaquetteVector> parity_partners(std::span<const PlaquetteVector> vectors);

/// ||Q v - lambda v|| for v embedded in an x-by-y box.
double plaquette_residual(const PlaquetteVector& v, int x, int y);

void add_plaquette(GroverState2D& state, const PlaquetteVector& v, cplx coeff);
cplx plaquette_overlap(const PlaquetteVector& v, const GroverState2D& state);  // <v, state>

/// psi0 minus its orthogonal projection onto span(vectors), renormalized.
/// Vectors may mix both eigenvalues (the two families are orthogonal and are
/// projected out one after the other). Throws FullyLocalized when nothing is
/// left.
GroverState2D orthogonalize_initial(const GroverState2D& psi0,
                                    std::span<const PlaquetteVector> vectors);

EntropySeries entropy_series_2d(const GroverState2D& phi0, std::int64_t t_max,
                                std::int64_t stride);

struct StableOptions {
  double tol = 1e-10;
  int hold = 100;
  std::int64_t step_cap = 10'000'000;
  // Rounding slowly feeds the non-decaying modes back in; they are projected
  // out again this often.
  std::int64_t reproject_every = 1000;
};

struct StableDistribution {
  std::vector<double> cells;  // row-major over (i, j), sums to 1
  std::int64_t steps;
};

/// Power iteration on the normalized state. The cell distribution alternates
/// between the even and odd sublattice, so steps t and t - 2 are compared
/// (L1 below tol for `hold` consecutive steps) and the mean of the last two
/// distributions is returned.
StableDistribution stable_distribution_2d(const GroverState2D& phi0,
                                          std::span<const PlaquetteVector> localized,
                                          const StableOptions& options = {});

}  // namespace qwalk
