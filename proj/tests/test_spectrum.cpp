#include <gtest/gtest.h>

#include <random>

#include "anosov/spectrum.hpp"

using namespace anosov;

namespace {

const ToralAutomorphism kCat = ToralAutomorphism::cat_map();

// the four points fixed by L^3, written out by hand
const std::vector<Vec2> kFix3 = {{0, 0}, {0.5, 0}, {0.5, 0.5}, {0, 0.5}};

double s3(const Potential& phi, Vec2 x) {
  double s = 0;
  for (int k = 0; k < 3; ++k, x = mod1(kCat.apply(x))) s += phi(x);
  return s;
}

}  // namespace

TEST(Spectrum, CountsMatchFixedPoints) {
  auto s = unmarked_spectrum(Potential::cosine(0.3), kCat, 12);
  for (int n = 1; n <= 12; ++n) EXPECT_EQ(static_cast<i64>(s.count(n)), kCat.fixed_point_count(n));
  for (auto& [n, v] : s.values) EXPECT_TRUE(std::is_sorted(v.begin(), v.end()));
}

TEST(Spectrum, ConstantPotential) {
  auto s = unmarked_spectrum(Potential::constant(0.25), kCat, 8);
  for (int n = 1; n <= 8; ++n)
    for (double v : s.at(n)) EXPECT_NEAR(v, 0.25 * n, 1e-14);
}

TEST(Spectrum, CosineAtPeriodThree) {
  auto phi = Potential::cosine(1.0);
  auto v = unmarked_spectrum(phi, kCat, 3).at(3);
  ASSERT_EQ(v.size(), 4u);
  std::vector<double> hand;
  for (auto x : kFix3) hand.push_back(s3(phi, x));
  std::sort(hand.begin(), hand.end());
  EXPECT_NEAR(multiset_gap(v, hand), 0.0, 1e-12);
  EXPECT_NEAR(v[0], -1.0, 1e-12);
  EXPECT_NEAR(v[1], -1.0, 1e-12);
  EXPECT_NEAR(v[2], -1.0, 1e-12);
  EXPECT_NEAR(v[3], 3.0, 1e-12);
}

TEST(Spectrum, DoublingCollapsesTheOrbit) {
  auto phi2 = Potential::cosine(1.0).compose_Mk(2);
  auto s = unmarked_spectrum(phi2, kCat, 3);
  for (double v : s.at(3)) EXPECT_NEAR(v, 3.0, 1e-12);
}

TEST(Spectrum, PeriodsEmbed) {
  auto phi = Potential({{{1, 0}, 0.3, 0.0}, {{1, 2}, -0.1, 0.2}}, 0.1);
  auto s = unmarked_spectrum(phi, kCat, 12);
  for (int n = 1; n <= 6; ++n)
    for (int k = 2; k * n <= 12; ++k)
      for (double v : s.at(n)) {
        const auto& big = s.at(k * n);
        auto it = std::lower_bound(big.begin(), big.end(), k * v - 1e-10);
        ASSERT_NE(it, big.end());
        EXPECT_NEAR(*it, k * v, 1e-10) << n << " in " << k * n;
      }
}

TEST(Spectrum, ConstantShift) {
  auto phi = Potential::cosine(0.3);
  auto a = unmarked_spectrum(phi, kCat, 8), b = unmarked_spectrum(phi.shifted(-0.4), kCat, 8);
  for (int n = 1; n <= 8; ++n)
    for (std::size_t i = 0; i < a.count(n); ++i) EXPECT_NEAR(b.at(n)[i], a.at(n)[i] - 0.4 * n, 1e-12);
}

TEST(Spectrum, PowerConsistency) {
  // the spectrum of phi + phi o L under L^2 at period n is that of phi under L at 2n
  auto phi = Potential({{{1, 0}, 0.3, 0.0}, {{1, 1}, 0.1, -0.2}}, 0.0);
  ToralAutomorphism L2(kCat.matrix().pow(2));
  auto phi_pair = phi + phi.compose_linear(kCat.matrix());
  auto s2 = unmarked_spectrum(phi_pair, L2, 6);
  auto s1 = unmarked_spectrum(phi, kCat, 12);
  for (int n = 1; n <= 6; ++n) EXPECT_LT(multiset_gap(s2.at(n), s1.at(2 * n)), 1e-10);
}

TEST(Spectrum, MaxPeriodGuard) {
  EXPECT_THROW(unmarked_spectrum(Potential::constant(0), kCat, 21), std::invalid_argument);
  EXPECT_THROW(unmarked_spectrum(Potential::constant(0), kCat, 0), std::invalid_argument);
}

TEST(Compare, SelfIsEqual) {
  auto s = unmarked_spectrum(Potential::cosine(0.3), kCat, 10);
  EXPECT_FALSE(compare_spectra(s, s).has_value());
}

TEST(Compare, CoboundaryInvariance) {
  auto phi = Potential::cosine(0.3);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (int trial = 0; trial < 3; ++trial) {
    Potential tf({{{1, 0}, u(rng), u(rng)}, {{1, -1}, u(rng), u(rng)}, {{2, 1}, u(rng), 0.0}}, u(rng));
    auto s = unmarked_spectrum(phi, kCat, 10), t = unmarked_spectrum(phi + coboundary(tf, kCat), kCat, 10);
    EXPECT_FALSE(compare_spectra(s, t, 1e-10).has_value());
  }
}

TEST(Compare, CounterexampleWitness) {
  auto phi = Potential::cosine(0.3).shifted(-0.51);
  auto a = unmarked_spectrum(phi, kCat, 6), b = unmarked_spectrum(phi.compose_Mk(2), kCat, 6);
  auto w = compare_spectra(a, b);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->period, 3);
  EXPECT_NEAR(w->gap, 4 * 0.3, 1e-12);
  // brute force over the hand list
  std::vector<double> ha, hb;
  for (auto x : kFix3) {
    ha.push_back(s3(phi, x));
    hb.push_back(s3(phi.compose_Mk(2), x));
  }
  std::sort(ha.begin(), ha.end());
  std::sort(hb.begin(), hb.end());
  EXPECT_NEAR(multiset_gap(ha, hb), 1.2, 1e-12);
  EXPECT_LT(multiset_gap(w->first, ha), 1e-12);
  EXPECT_LT(multiset_gap(w->second, hb), 1e-12);
}

TEST(Compare, TolerancesAndSizes) {
  EXPECT_EQ(multiset_gap({1, 2}, {1, 2, 3}), std::numeric_limits<double>::infinity());
  OrbitSpectrum a{1, {{1, {0.0}}}}, b{1, {{1, {1e-10}}}}, c{2, {{1, {0.0}}, {2, {0.0}}}};
  EXPECT_FALSE(compare_spectra(a, b).has_value());
  EXPECT_TRUE(compare_spectra(a, b, 1e-11).has_value());
  EXPECT_THROW(compare_spectra(a, c), std::invalid_argument);
}
