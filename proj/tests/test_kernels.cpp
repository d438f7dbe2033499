#include <doctest.h>

#include <cstring>
#include <random>
#include <vector>

#include "qwalk/kernels.hpp"

using namespace qwalk::kernels;

namespace {

std::vector<cplx> random_vector(std::size_t size, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<cplx> v(size);
  for (auto& z : v) z = {g(rng), g(rng)};
  return v;
}

bool same_bits(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(cplx)) == 0;
}

}  // namespace

TEST_CASE("parallel kernels reproduce the serial references bit for bit") {
  const cplx a(0.6, 0.0);
  const cplx b(0.0, 0.8);
  for (int threads : {1, 2, 4}) {
    set_thread_limit(threads);
    for (std::size_t sites : {2u, 17u, 40000u}) {
      const auto in = random_vector(2 * sites, 7);
      std::vector<cplx> s(in.size()), p(in.size());
      const auto ls = walk_step_serial(in, s, a, b);
      const auto lp = walk_step(in, p, a, b);
      CHECK(same_bits(s, p));
      CHECK(ls.left == lp.left);
      CHECK(ls.right == lp.right);
    }
    for (int side : {6, 31, 90}) {
      const auto in = random_vector(static_cast<std::size_t>(side) * (side + 3) * 4, 11);
      std::vector<cplx> s(in.size()), p(in.size());
      for (bool absorbing : {true, false}) {
        const double ms = grover_step_serial(in, s, side, side + 3, absorbing);
        const double mp = grover_step(in, p, side, side + 3, absorbing);
        CHECK(same_bits(s, p));
        CHECK(ms == mp);
      }
    }
    for (std::size_t dim : {3u, 70u, 130u}) {
      const auto x = random_vector(dim * dim, 3);
      const auto y = random_vector(dim * dim, 5);
      std::vector<cplx> s(dim * dim), p(dim * dim);
      matmul_serial(x, y, s, dim);
      matmul(x, y, p, dim);
      CHECK(same_bits(s, p));
      // Same blocked kernel for any thread count.
      std::vector<cplx> q(dim * dim);
      set_thread_limit(1);
      matmul(x, y, q, dim);
      set_thread_limit(threads);
      CHECK(same_bits(p, q));
    }
  }
  set_thread_limit(0);
}
