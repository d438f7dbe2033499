#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "oracles.hpp"
#include "qwalk/charpoly.hpp"
#include "qwalk/error.hpp"
#include "qwalk/spectrum.hpp"

using namespace qwalk;

namespace {

constexpr double kPi = std::numbers::pi;

double root_residual(const SpectralPoint& p, int n, const CoinParameters& c) {
  const int sigma = equation_sign(p.k, p.s);
  return std::abs(std::sin(static_cast<double>(n) * p.theta) - cplx(0, sigma * c.y) * std::sin(p.theta));
}

}  // namespace

TEST_CASE("regime selection") {
  CHECK(select_regime(1, 1000) == Regime::FixedK);
  CHECK(select_regime(10, 1000) == Regime::FixedK);
  CHECK(select_regime(11, 1000) == Regime::Beta);
  CHECK(select_regime(100, 1000) == Regime::Beta);
  CHECK(select_regime(101, 1000) == Regime::Alpha);
}

TEST_CASE("theta seeds") {
  const auto h = hadamard_coin();
  const cplx fk = theta_seed(1, 100, 1, h, Regime::FixedK);
  const double n = 100;
  const double n4 = n * n * n * n;
  CHECK(std::abs(fk - cplx(kPi / n - kPi / (n * n * n),
                           kPi / (n * n) - kPi * (1 + kPi * kPi / 3) / n4)) < 1e-14);
  for (int s : {1, -1}) {
    const cplx al = theta_alpha(0.5, 100, s, h);
    CHECK(std::abs(al - cplx(kPi / 2, s * std::asinh(1.0) / 100)) < 1e-15);
  }
  // Regimes overlap around k = sqrt(n).
  const cplx a = theta_seed(20, 400, 1, h, Regime::Alpha);
  const cplx b = theta_seed(20, 400, 1, h, Regime::Beta);
  const cplx f = theta_seed(20, 400, 1, h, Regime::FixedK);
  const cplx exact = solve_theta(20, 400, 1, h);
  CHECK(std::abs(a - exact) < 1e-3);
  CHECK(std::abs(b - exact) < 1e-5);
  CHECK(std::abs(f - exact) < 1e-5);
}

TEST_CASE("n = 2 roots") {
  const auto h = hadamard_coin();
  const auto sp = compute_spectrum(2, h);
  REQUIRE(sp.points.size() == 2);
  for (const auto& p : sp.points) {
    CHECK(std::abs(std::abs(p.lambda) - 1 / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(p.lambda.real()) < 1e-12);
    // lambda = +-i|b|, so |a| cos(theta) = (lambda^2 + 1) / (2 lambda) has modulus |a|^2 / (2|b|).
    CHECK(std::abs(h.abs_a() * std::cos(p.theta)) ==
          doctest::Approx(0.5 / (2 * h.abs_b())).epsilon(1e-12));
    CHECK(p.residual <= 1e-12);
  }
  const auto v = eigenvector_exact(cplx(0, h.abs_b()), 2, h);
  const oracle::CVec q = oracle::walk_matrix(2, h) * oracle::to_eigen(v);
  CHECK((q - cplx(0, h.abs_b()) * oracle::to_eigen(v)).norm() <= 1e-12);
}

TEST_CASE("lambda_of_theta") {
  const auto h = hadamard_coin();
  const cplx up = lambda_of_theta(0.7, 1, h);
  CHECK(std::abs(std::abs(up) - 1.0) < 1e-15);
  CHECK(up.imag() > 0);
  CHECK(std::abs(lambda_of_theta(kPi / 2, 1, h) - cplx(0, 1)) < 1e-15);
  CHECK(std::abs(lambda_of_theta(kPi / 2, -1, h) - cplx(0, -1)) < 1e-15);
  const cplx th = solve_theta(1, 200, 1, h);
  const cplx lam = lambda_of_theta(th, 1, h);
  const cplx lead = std::polar(1.0, kPi / 4) * (1.0 + cplx(0, kPi * kPi / (2.0 * 200 * 200)));
  CHECK(std::abs(lam - lead) < 1e-5);
  CHECK(std::abs(lam) < 1.0);
}

TEST_CASE("spectrum at several sizes") {
  for (const auto& coin : {hadamard_coin(), build_coin({0.6, 0}, {0, 0.8})}) {
    for (int n : {3, 10, 50, 200, 500}) {
      const auto sp = compute_spectrum(n, coin);
      CHECK(sp.size_with_multiplicity() == static_cast<std::size_t>(2 * n));
      const auto bound = sector_bound(n, coin);
      for (const auto& p : sp.points) {
        CHECK(p.residual <= 1e-8);
        CHECK(root_residual(p, n, coin) <= 1e-10);
        CHECK(in_sector(p.lambda, bound));
        CHECK(p.theta.real() > 0.0);
        CHECK(p.theta.real() < kPi);
        CHECK((p.theta.imag() > 0) == (p.s > 0));
      }
      // Distinct, and the s = -1 family is the conjugate of s = +1.
      std::vector<cplx> plus, minus;
      for (const auto& p : sp.points) (p.s > 0 ? plus : minus).push_back(p.lambda);
      auto order = [](cplx u, cplx v) { return u.real() != v.real() ? u.real() < v.real() : u.imag() < v.imag(); };
      for (auto& z : minus) z = std::conj(z);
      std::sort(plus.begin(), plus.end(), order);
      std::sort(minus.begin(), minus.end(), order);
      REQUIRE(plus.size() == minus.size());
      for (std::size_t k = 0; k < plus.size(); ++k) CHECK(std::abs(plus[k] - minus[k]) <= 1e-10);
      std::vector<cplx> all;
      for (const auto& p : sp.points) all.push_back(p.lambda);
      std::sort(all.begin(), all.end(), order);
      double closest = 1e9;
      for (std::size_t i = 0; i < all.size(); ++i) {
        for (std::size_t j = i + 1; j < all.size() && all[j].real() - all[i].real() < 1e-6; ++j) {
          closest = std::min(closest, std::abs(all[i] - all[j]));
        }
      }
      CHECK(closest > 1e-9);
    }
  }
}

TEST_CASE("solved eigenvalues are roots of the characteristic polynomial") {
  const auto h = hadamard_coin();
  for (int n : {20, 100, 200}) {
    const auto sp = compute_spectrum(n, h);
    for (const auto& p : sp.points) {
      const double at_root = std::abs(charpoly_eval(p.lambda, n, h));
      const double nearby = std::abs(charpoly_eval(p.lambda * (1.0 + 1e-4), n, h));
      CHECK(at_root <= 1e-6 * nearby);
    }
  }
}

TEST_CASE("exact eigenvectors") {
  const auto h = hadamard_coin();
  const auto sp = compute_spectrum(20, h);
  const oracle::CMat q = oracle::walk_matrix(20, h);
  for (const auto& p : sp.points) {
    const auto v = eigenvector_exact(p, 20, h);
    CHECK(std::abs(v[0]) < 1e-14);  // r_1 = 0
    const oracle::CVec ve = oracle::to_eigen(v);
    CHECK((q * ve - p.lambda * ve).norm() <= 1e-12);
    CHECK(ve.norm() == doctest::Approx(1.0).epsilon(1e-14));
  }
  // Low modes look like sin^2(pi k beta).
  const int n = 200;
  for (int k = 1; k <= 4; ++k) {
    const auto v = eigenvector_exact(solve_point(k, n, 1, h), n, h);
    std::vector<double> prof(n), ref(n);
    for (int j = 0; j < n; ++j) {
      prof[j] = std::norm(v[2 * j]) + std::norm(v[2 * j + 1]);
      ref[j] = std::pow(std::sin(kPi * k * (j + 1.0) / n), 2);
    }
    const double mp = std::accumulate(prof.begin(), prof.end(), 0.0) / n;
    const double mr = std::accumulate(ref.begin(), ref.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (int j = 0; j < n; ++j) {
      sxy += (prof[j] - mp) * (ref[j] - mr);
      sxx += (prof[j] - mp) * (prof[j] - mp);
      syy += (ref[j] - mr) * (ref[j] - mr);
    }
    CHECK(sxy / std::sqrt(sxx * syy) >= 0.99);
  }
}

TEST_CASE("asymptotic eigenvector") {
  const auto c = build_coin({0.6, 0}, {0, 0.8});
  const double mid[] = {0.5};
  for (int s : {1, -1}) {
    // Leading term at beta = 1/2: [conj(a) b; s i |a||b|] up to the phase.
    const auto v = eigenvector_asymptotic(1, 1000000, s, c, mid)[0];
    CHECK(std::abs(std::abs(v[0]) - std::abs(v[1])) < 1e-5);
  }
  const double ends[] = {0.0, 1.0};
  const auto e = eigenvector_asymptotic(1, 1000000, 1, c, ends);
  CHECK(std::abs(e[0][0]) < 1e-5);
  CHECK(std::abs(e[1][0]) < 1e-5);

  // Sup-norm error against the exact vector; expected ratio 2^2.5 per doubling.
  for (int s : {1, -1}) {
    double prev = 0.0;
    for (int n : {100, 200, 400, 800}) {
      const auto exact = eigenvector_exact(solve_point(1, n, s, c), n, c);
      std::vector<double> betas(n);
      for (int j = 0; j < n; ++j) betas[j] = (j + 1.0) / n;
      const auto approx = eigenvector_asymptotic(1, n, s, c, betas);
      double an = 0.0;
      for (const auto& a : approx) an += std::norm(a[0]) + std::norm(a[1]);
      an = std::sqrt(an);
      // Align the global phase on the largest exact entry.
      std::size_t big = 0;
      for (std::size_t k = 0; k < exact.size(); ++k) {
        if (std::abs(exact[k]) > std::abs(exact[big])) big = k;
      }
      const cplx ap = approx[big / 2][big % 2] / an;
      const cplx rot = (exact[big] / ap) / std::abs(exact[big] / ap);
      double err = 0.0;
      for (int j = 0; j < n; ++j) {
        for (int comp = 0; comp < 2; ++comp) {
          err = std::max(err, std::abs(exact[2 * j + comp] - rot * approx[j][comp] / an));
        }
      }
      if (prev > 0.0) {
        const double ratio = prev / err;
        CHECK(ratio >= std::pow(2.0, 2.5) / 2);
        CHECK(ratio <= std::pow(2.0, 2.5) * 2);
      }
      prev = err;
    }
  }
}

TEST_CASE("asymptotic eigenvalue orders") {
  for (const auto& coin : {hadamard_coin(), build_coin({0.6, 0}, {0, 0.8})}) {
    for (int s : {1, -1}) {
      double pt = 0, pl = 0, pa = 0, pal = 0;
      for (int n : {100, 200, 400}) {
        const cplx th = solve_theta(1, n, s, coin);
        const cplx lam = lambda_of_theta(th, s, coin);
        const double et = std::abs(th - theta_fixed_k(1, n, s, coin));
        const double el = std::abs(lam - lambda_asymptotic(1, n, s, coin, Regime::FixedK));
        const cplx tha = solve_theta(n / 4, n, s, coin);
        const cplx la = lambda_of_theta(tha, s, coin);
        const double ea = std::abs(tha - theta_alpha(0.25, n, s, coin));
        const double eal = std::abs(la - lambda_asymptotic(0.25, n, s, coin, Regime::Alpha));
        if (pt > 0) {
          CHECK(pt / et >= 24);
          CHECK(pt / et <= 40);
          CHECK(pl / el >= 24);
          CHECK(pl / el <= 40);
          CHECK(pa / ea >= 2);
          CHECK(pa / ea <= 8);
          CHECK(pal / eal >= 2);
          CHECK(pal / eal <= 8);
        }
        pt = et;
        pl = el;
        pa = ea;
        pal = eal;
      }
      // Beta regime: theta error O(n^-7/2) at fixed beta = 1/2.
      double pb = 0;
      for (int n : {100, 400, 1600}) {
        const int k = static_cast<int>(std::lround(0.5 * std::sqrt(n)));
        const double eb = std::abs(solve_theta(k, n, s, coin) - theta_beta(0.5, n, s, coin));
        if (pb > 0) {
          // One step here is two doublings: predicted 2^7.
          CHECK(pb / eb >= std::pow(2.0, 7) / 4);
          CHECK(pb / eb <= std::pow(2.0, 7) * 4);
        }
        pb = eb;
      }
    }
  }
}

TEST_CASE("alpha regime modulus at alpha = 1/2") {
  const auto h = hadamard_coin();
  for (int s : {1, -1}) {
    const cplx lam = lambda_alpha(0.5, 1000, s, h);
    CHECK(std::abs(lam) == doctest::Approx(1.0 - h.abs_a() * std::asinh(1.0) / 1000).epsilon(1e-12));
  }
}

TEST_CASE("sector bound") {
  const auto h = hadamard_coin();
  CHECK(sector_bound(10, h).phi == doctest::Approx(kPi / 4).epsilon(1e-14));
  double prev = -1;
  for (int n : {100, 200, 400}) {
    const auto b = sector_bound(n, h);
    const double scaled = std::abs(b.r - b.r_first_order) * n * n;
    if (prev > 0) CHECK(scaled <= 2 * prev);
    prev = scaled;
    CHECK(b.r < 1.0);
  }
  CHECK(in_sector(0.0, sector_bound(10, h)));
  CHECK_FALSE(in_sector(0.95, sector_bound(10, h)));
}

TEST_CASE("stabilization time") {
  const auto h = hadamard_coin();
  const int n = 100;
  CHECK(stabilization_time(2, std::exp(-1.0), n, h) ==
        doctest::Approx(1e6 / (3 * kPi * kPi)).epsilon(1e-12));
  CHECK(stabilization_time(2, 1.0, n, h) == 0.0);
  const double t = stabilization_time(2, 0.01, n, h);
  const double r = std::abs(solve_point(2, n, 1, h).lambda) / std::abs(solve_point(1, n, 1, h).lambda);
  const double decay = std::pow(r, t);
  CHECK(decay >= 0.005);
  CHECK(decay <= 0.02);
  CHECK_THROWS_AS(stabilization_time(1, 0.01, n, h), Error);
}
