#include <gtest/gtest.h>

#include <random>

#include "anosov/potential.hpp"

using namespace anosov;

namespace {

const ToralAutomorphism kCat = ToralAutomorphism::cat_map();

RationalPoint rp(i64 p1, i64 q1, i64 p2, i64 q2) { return {Rational(p1, q1), Rational(p2, q2)}; }

Potential sample_potential() {
  return Potential({{{1, 0}, 0.3, 0.0}, {{1, 2}, -0.1, 0.2}, {{0, 3}, 0.05, -0.07}}, 0.4);
}

// naive oracle: plain summation of the defining series
double naive_eval(const Potential& phi, Vec2 x) {
  double s = phi.constant_term();
  for (auto& t : phi.terms()) {
    double a = 2 * std::numbers::pi * (t.m[0] * x.x + t.m[1] * x.y);
    s += t.c_cos * std::cos(a) + t.c_sin * std::sin(a);
  }
  return s;
}

}  // namespace

TEST(Eval, ConstantPotential) {
  auto phi = Potential::constant(1.25);
  EXPECT_EQ(phi(Vec2{0.1, 0.7}), 1.25);
  EXPECT_EQ(phi(rp(1, 3, 2, 7)), 1.25);
}

TEST(Eval, CosineExamples) {
  auto phi = Potential::cosine(1.0);
  EXPECT_NEAR(phi(rp(1, 2, 0, 1)), -1.0, 1e-15);
  EXPECT_NEAR(phi(rp(0, 1, 0, 1)), 1.0, 1e-15);
  EXPECT_NEAR(phi(Vec2{0.5, 0.0}), -1.0, 1e-15);
}

TEST(Eval, MatchesNaiveAndIsPeriodic) {
  auto phi = sample_potential();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 200; ++i) {
    Vec2 x{u(rng), u(rng)};
    EXPECT_NEAR(phi(x), naive_eval(phi, x), 1e-13);
    EXPECT_NEAR(phi(x), phi(x + Vec2{1, -2}), 1e-12);
  }
}

TEST(Eval, RationalMatchesFloat) {
  auto phi = sample_potential();
  for (i64 q = 1; q < 30; ++q)
    for (i64 p = 0; p < q; ++p) {
      auto x = rp(p, q, (p * 7) % q, q);
      EXPECT_NEAR(phi(x), phi(x.to_vec()), 1e-13);
    }
}

TEST(Eval, DifferenceMatchesDirect) {
  auto phi = sample_potential();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 200; ++i) {
    Vec2 x{u(rng), u(rng)};
    Vec2 d{u(rng) - 0.5, u(rng) - 0.5};
    EXPECT_NEAR(phi.difference(x, d), naive_eval(phi, x + d) - naive_eval(phi, x), 1e-13);
  }
  // tiny displacement: first-order Taylor oracle
  Vec2 x{0.2, 0.3}, d{1e-12, -2e-12};
  double grad_dot = 0;
  for (auto& t : phi.terms()) {
    double a = 2 * std::numbers::pi * (t.m[0] * x.x + t.m[1] * x.y);
    double md = t.m[0] * d.x + t.m[1] * d.y;
    grad_dot += 2 * std::numbers::pi * md * (-t.c_cos * std::sin(a) + t.c_sin * std::cos(a));
  }
  EXPECT_NEAR(phi.difference(x, d), grad_dot, 1e-22);
}

TEST(Lipschitz, BoundHoldsOnRandomPairs) {
  auto phi = sample_potential();
  const double C3 = phi.lipschitz_constant();
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 10000; ++i) {
    Vec2 x{u(rng), u(rng)}, y{u(rng), u(rng)};
    if (i % 2) y = mod1(x + Vec2{(u(rng) - 0.5) * 1e-3, (u(rng) - 0.5) * 1e-3});
    EXPECT_LE(std::abs(phi(x) - phi(y)), C3 * torus_distance(x, y) + 1e-14);
  }
}

TEST(Birkhoff, ConstantGivesNc) {
  auto phi = Potential::constant(0.7);
  EXPECT_NEAR(birkhoff_sum(phi, kCat, rp(1, 5, 2, 5), 9), 6.3, 1e-14);
}

TEST(Birkhoff, PeriodThreeOrbit) {
  auto phi = Potential::cosine(1.0);
  EXPECT_NEAR(birkhoff_sum(phi, kCat, rp(1, 2, 0, 1), 3), -1.0, 1e-14);
}

TEST(Birkhoff, CocycleIdentity) {
  auto phi = sample_potential();
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<i64> den(1, 200);
  for (int i = 0; i < 100; ++i) {
    i64 q1 = den(rng), q2 = den(rng);
    RationalPoint x{Rational(static_cast<i64>(rng() % q1), q1), Rational(static_cast<i64>(rng() % q2), q2)};
    int m = 1 + static_cast<int>(rng() % 8), n = 1 + static_cast<int>(rng() % 8);
    double lhs = birkhoff_sum(phi, kCat, x, m + n);
    double rhs = birkhoff_sum(phi, kCat, x, m) + birkhoff_sum(phi, kCat, kCat.iterate(x, m), n);
    EXPECT_NEAR(lhs, rhs, 1e-12);
  }
}

TEST(ComposeMk, IdentityAndDoubling) {
  auto phi = Potential::cosine(1.0);
  EXPECT_EQ(phi.compose_Mk(1), phi);
  auto phi2 = phi.compose_Mk(2);
  EXPECT_EQ(phi2.terms()[0].m, (std::array<i64, 2>{2, 0}));
  EXPECT_NEAR(phi2(rp(1, 2, 0, 1)), 1.0, 1e-15);
  EXPECT_NEAR(phi2(rp(1, 2, 0, 1)), phi(rp(0, 1, 0, 1)), 1e-15);
}

TEST(ComposeMk, PointwiseAgreement) {
  auto phi = sample_potential();
  auto phi3 = phi.compose_Mk(3);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 1000; ++i) {
    Vec2 x{u(rng), u(rng)};
    EXPECT_NEAR(phi3(x), phi(lift_Mk(x, 3)), 1e-12);
  }
}

TEST(ComposeMk, ConstantAndLipschitzScaling) {
  auto phi = sample_potential();
  for (i64 k = 1; k <= 5; ++k) {
    auto pk = phi.compose_Mk(k);
    EXPECT_EQ(pk.constant_term(), phi.constant_term());
    EXPECT_NEAR(pk.lipschitz_constant(), k * phi.lipschitz_constant(), 1e-12);
  }
}

TEST(Coboundary, SumsVanishOnPeriodicOrbits) {
  auto u = sample_potential();
  auto cob = coboundary(u, kCat);
  for (int n = 1; n <= 6; ++n)
    for (auto& x : periodic_points(kCat, n)) EXPECT_NEAR(birkhoff_sum(cob, kCat, x, n), 0.0, 1e-12);
  Vec2 x{0.31, 0.77};
  EXPECT_NEAR(cob(x), u(x) - u(kCat.apply(x)), 1e-13);
}

TEST(Theta, TrivialCases) {
  auto hv = HomoclinicVector::from_index(kCat, {1, 0});
  auto t = theta_v(Potential::constant(2.0), kCat, hv, {0.3, 0.4});
  EXPECT_EQ(t.value, 1.0);
  EXPECT_EQ(t.tail_bound, 0.0);
  auto zero = HomoclinicVector::from_index(kCat, {0, 0});
  auto t0 = theta_v(sample_potential(), kCat, zero, {0.3, 0.4});
  EXPECT_EQ(t0.value, 1.0);
}

TEST(Theta, MatchesDirectSeries) {
  // oracle: iterate x and x + v separately in long double-free plain arithmetic
  auto phi = Potential::cosine(0.3);
  auto hv = HomoclinicVector::from_index(kCat, {1, 1});
  Vec2 x{0.123, 0.456};
  auto t = theta_v(phi, kCat, hv, x, 12);
  double s = 0;
  Vec2 a = x, b = mod1(x + hv.point);
  s += phi(b) - phi(a);
  Vec2 a2 = x, b2 = b;
  for (int n = 1; n <= 12; ++n) {
    a = kCat.apply(a);
    b = kCat.apply(b);
    a2 = kCat.apply_inverse(a2);
    b2 = kCat.apply_inverse(b2);
    s += phi(b) - phi(a) + phi(b2) - phi(a2);
  }
  EXPECT_NEAR(t.log_value, s, 1e-9);
  EXPECT_GT(t.value, 0.0);
}

TEST(Theta, TailContract) {
  auto phi = sample_potential();
  auto hs = homoclinic_points(kCat, 3);
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 100; ++i) {
    const auto& v = hs[rng() % hs.size()];
    Vec2 x{u(rng), u(rng)};
    for (int N : {5, 10, 20}) {
      auto a = theta_v(phi, kCat, v, x, N);
      auto b = theta_v(phi, kCat, v, x, 2 * N + 10);
      EXPECT_LE(std::abs(a.log_value - b.log_value), a.tail_bound + 1e-13);
      EXPECT_GT(a.value, 0.0);
    }
  }
}

TEST(Theta, CocycleIdentity) {
  auto phi = sample_potential();
  auto hs = homoclinic_points(kCat, 2);
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 100; ++i) {
    const auto& w = hs[rng() % hs.size()];
    const auto& vt = hs[rng() % hs.size()];
    Vec2 x{u(rng), u(rng)};
    const int N = 30;
    auto lhs = theta_v(phi, kCat, w.minus(kCat, vt), x, N);
    auto r1 = theta_v(phi, kCat, vt.negated(kCat), x, N);
    auto r2 = theta_v(phi, kCat, w, mod1(x - vt.point), N);
    double budget = lhs.tail_bound + r1.tail_bound + r2.tail_bound + 1e-12;
    EXPECT_NEAR(lhs.log_value, r1.log_value + r2.log_value, budget);
  }
}
