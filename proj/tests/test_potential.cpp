#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "corpus.hpp"
#include "dprime/error.hpp"
#include "dprime/potential.hpp"

using namespace dprime;
using doctest::Approx;

TEST_CASE("eval of square, table and zero potentials") {
  const auto well = Potential::square(-1.0, 1.0, -corpus::half_pi_sq);
  CHECK(eval(well, 0.0) == -corpus::half_pi_sq);
  CHECK(eval(well, 2.0) == 0.0);
  CHECK(eval(Potential::table({0.0, 1.0}, {0.0, 2.0}), 0.5) == Approx(1.0));
  CHECK(eval(Potential::zero(), 0.3) == 0.0);
  CHECK(eval(Potential::exp_decay(2.0), -1.0) == Approx(2.0 * std::exp(-1.0)));
}

TEST_CASE("coupling multiplies the base shape") {
  const auto v = Potential::square(-1.0, 1.0, 1.0).times(-3.0);
  CHECK(v(0.2) == -3.0);
  CHECK(v.times(0.0)(0.2) == 0.0);
}

TEST_CASE("moments") {
  auto m = moments(Potential::square(-1.0, 1.0, -1.0));
  CHECK(m.m0 == Approx(-2.0).epsilon(1e-12));
  CHECK(std::abs(m.m1) < 1e-12);

  m = moments(Potential::table({-1.0, 1.0}, {1.5, -1.5}));
  CHECK(std::abs(m.m0) < 1e-12);
  CHECK(m.m1 == Approx(-1.0).epsilon(1e-12));

  m = moments(Potential::zero());
  CHECK(m.m0 == 0.0);
  CHECK(m.m1 == 0.0);
}

TEST_CASE("Faddeev-Marchenko norm") {
  CHECK(fm_norm(Potential::square(-1.0, 1.0, 1.0)) == Approx(3.0).epsilon(1e-12));
  CHECK(fm_norm(Potential::zero()) == 0.0);
  CHECK(fm_norm(Potential::exp_decay(1.0)) == Approx(4.0).epsilon(1e-10));
}

TEST_CASE("tails") {
  const auto bar = Potential::square(-1.0, 1.0, 1.0);
  auto t = tails(bar, 0.0);
  CHECK(t.sigma_plus == Approx(1.0).epsilon(1e-12));
  CHECK(t.sigma_minus == Approx(1.0).epsilon(1e-12));
  CHECK(t.tau_plus == Approx(1.5).epsilon(1e-12));
  CHECK(t.tau_minus == Approx(1.5).epsilon(1e-12));

  t = tails(bar, 2.0);
  CHECK(t.sigma_plus == 0.0);
  CHECK(t.tau_plus == 0.0);

  t = tails(Potential::zero(), 0.7);
  CHECK(t.sigma_plus + t.sigma_minus + t.tau_plus + t.tau_minus == 0.0);

  // e^{-|x|}: int_x^inf (1+t) e^{-t} dt = (2+x) e^{-x} for x >= 0.
  t = tails(Potential::exp_decay(1.0), 1.5);
  CHECK(t.tau_plus == Approx(3.5 * std::exp(-1.5)).epsilon(1e-10));
  CHECK(t.sigma_plus == Approx(std::exp(-1.5)).epsilon(1e-10));
}

TEST_CASE("splitting scale") {
  const auto bar = Potential::square(-1.0, 1.0, 1.0);
  auto s = splitting_scale(bar, 0.01);
  CHECK(s.xi_eps == Approx(std::sqrt(99.0)).epsilon(1e-10));
  CHECK(s.x_eps == Approx(0.01 * std::sqrt(99.0)).epsilon(1e-10));

  s = splitting_scale(bar, 0.5);
  CHECK(s.xi_eps == Approx(1.0).epsilon(1e-10));
  CHECK(s.x_eps == Approx(0.5).epsilon(1e-10));

  const auto e = Potential::exp_decay(1.0);
  s = splitting_scale(e, 0.01, 0.5);
  CHECK(std::abs(rho_weight(e, s.xi_eps, 0.5) * 0.01 - 1.0) < 1e-10);

  CHECK_THROWS_AS(splitting_scale(bar, 2.0), std::invalid_argument);
}

TEST_CASE("scale") {
  const auto bar = Potential::square(-1.0, 1.0, 1.0);
  const auto one = scale(bar, 1.0);
  for (double x : {-1.2, -0.5, 0.0, 0.9, 1.0, 3.0}) CHECK(one(x) == bar(x));

  const auto half = scale(bar, 0.5);
  CHECK(half(0.25) == 4.0);
  CHECK(half(0.75) == 0.0);

  const double eps = 0.2;
  for (const auto& entry : corpus::real_line()) {
    CAPTURE(entry.name);
    const auto m = moments(entry.potential);
    const auto ms = moments(scale(entry.potential, eps));
    CHECK(ms.m0 == Approx(m.m0 / eps).epsilon(1e-10));
  }
}

TEST_CASE("truncate") {
  const auto bar = Potential::square(-1.0, 1.0, 1.0);
  const auto wide = truncate(bar, 1.5);
  for (double x : {-2.0, -1.0, -0.3, 0.0, 1.0, 1.4}) CHECK(wide(x) == bar(x));
  CHECK(truncate(bar, 0.5)(0.75) == 0.0);

  const auto e = Potential::exp_decay(1.0);
  for (double w : {4.0, 1.0, 0.25}) CHECK(fm_norm(truncate(e, w)) <= fm_norm(e));
  CHECK(fm_norm(truncate(e, 1.0)) == Approx(4.0 - 2.0 * 3.0 * std::exp(-1.0)).epsilon(1e-10));
}

TEST_CASE("tail weight norm") {
  CHECK(tail_weight_norm(Potential::square(-1.0, 1.0, 1.0), 0.1) == 0.0);
  CHECK(tail_weight_norm(Potential::zero(), 0.1) == 0.0);

  const auto e = Potential::exp_decay(1.0);
  const double a = tail_weight_norm(e, 0.1);
  const double b = tail_weight_norm(e, 0.05);
  const double c = tail_weight_norm(e, 0.01);
  CHECK(a > b);
  CHECK(b > c);
  // 2 e^{-xi} / eps in closed form.
  const auto s = splitting_scale(e, 0.05);
  CHECK(b == Approx(2.0 * std::exp(-s.xi_eps) / 0.05).epsilon(1e-9));
}

TEST_CASE("infinite support and breakpoints") {
  CHECK_FALSE(Potential::exp_decay(1.0).support().has_value());
  const auto sup = Potential::square(-1.0, 2.0, 3.0).scaled(0.5).support();
  REQUIRE(sup.has_value());
  CHECK(sup->left == -0.5);
  CHECK(sup->right == 1.0);
  CHECK(Potential::exp_decay(1.0).truncated(2.0).support()->right == 2.0);
  CHECK(Potential::piecewise({{0.0, 1.0, 1.0}, {1.0, 2.0, -1.0}}).piecewise_constant());
  CHECK_FALSE(Potential::table({0.0, 1.0}, {0.0, 1.0}).piecewise_constant());
}

TEST_CASE("invalid constructions are rejected") {
  CHECK_THROWS_AS(Potential::square(1.0, -1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Potential::piecewise({{0.0, 2.0, 1.0}, {1.0, 3.0, 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Potential::table({0.0, 0.0}, {1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(Potential::exp_decay(1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(scale(Potential::zero(), 0.0), std::invalid_argument);
}

// Property tests. Seeds are fixed and reported on failure.

TEST_CASE("property: scaling composes") {
  const std::uint64_t seed = 20240611;
  CAPTURE(seed);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> xdist(-3.0, 3.0), edist(0.05, 2.0);
  auto potentials = corpus::real_line();
  potentials.push_back({"exp", Potential::exp_decay(1.3, 0.7)});
  for (int i = 0; i < 1000; ++i) {
    const auto& p = potentials[i % potentials.size()].potential;
    const double e1 = edist(rng), e2 = edist(rng), x = xdist(rng);
    const double lhs = scale(scale(p, e1), e2)(x);
    const double rhs = scale(p, e1 * e2)(x);
    CAPTURE(i);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("property: tails are monotone") {
  const std::uint64_t seed = 7781;
  CAPTURE(seed);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> xdist(-4.0, 4.0);
  auto potentials = corpus::real_line();
  potentials.push_back({"exp", Potential::exp_decay(-0.8, 1.5)});
  for (const auto& entry : potentials) {
    CAPTURE(entry.name);
    for (int i = 0; i < 40; ++i) {
      double x1 = xdist(rng), x2 = xdist(rng);
      if (x1 > x2) std::swap(x1, x2);
      const auto t1 = tails(entry.potential, x1), t2 = tails(entry.potential, x2);
      CHECK(t1.tau_plus >= t2.tau_plus - 1e-12);
      CHECK(t1.tau_minus <= t2.tau_minus + 1e-12);
      CHECK(t1.tau_plus >= t1.sigma_plus);
      CHECK(t1.tau_minus >= t1.sigma_minus);
      CHECK(t1.sigma_plus >= 0.0);
      CHECK(t1.sigma_minus >= 0.0);
    }
  }
}

TEST_CASE("property: splitting scale along decreasing eps") {
  auto potentials = corpus::real_line();
  potentials.push_back({"exp", Potential::exp_decay(1.0)});
  for (const auto& entry : potentials) {
    CAPTURE(entry.name);
    double prev_xi = 0.0, prev_x = INFINITY, prev_tail = INFINITY;
    for (double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
      CAPTURE(eps);
      const auto s = splitting_scale(entry.potential, eps);
      CHECK(std::abs(rho_weight(entry.potential, s.xi_eps) * eps - 1.0) <= 1e-8);
      CHECK(s.xi_eps > prev_xi);
      CHECK(s.x_eps < prev_x);
      const double tail = tail_weight_norm(entry.potential, eps);
      CHECK(tail <= prev_tail);
      prev_xi = s.xi_eps;
      prev_x = s.x_eps;
      prev_tail = tail;
    }
    CHECK(prev_tail < 1e-4);
  }
}
