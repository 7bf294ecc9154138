#include <gtest/gtest.h>

#include <sstream>

#include "anosov/pressure.hpp"

using namespace anosov;

namespace {

const ToralAutomorphism kCat = ToralAutomorphism::cat_map();
const double kLogGolden = std::log((1 + std::sqrt(5.0)) / 2);

const MarkovCoding& cat_coding() {
  static const MarkovCoding c = build_partition(kCat);
  return c;
}

// Lucas numbers are the traces of A^n; |Fix(L^n)| = |L_n - 1 - (-1)^n|.
i64 fix_count_oracle(int n) {
  i64 a = 2, b = 1;
  for (int k = 0; k < n; ++k) {
    i64 c = a + b;
    a = b;
    b = c;
  }
  return std::abs(a - 1 - (n % 2 ? -1 : 1));
}

// brute force: scan the grid (i/D, j/D), D = |det(A^n - I)|, iterate in floats
double brute_log_partition(const Potential& phi, int n) {
  const i64 D = std::abs((kCat.matrix().pow(n) - IntMatrix2::identity()).det());
  std::vector<double> vals;
  for (i64 i = 0; i < D; ++i)
    for (i64 j = 0; j < D; ++j) {
      Vec2 x{double(i) / D, double(j) / D};
      Vec2 y = mod1(kCat.iterate(x, n));
      if (torus_distance(x, y) > 1e-7) continue;
      double s = 0;
      for (int k = 0; k < n; ++k, x = kCat.apply(x)) s += phi(x);
      vals.push_back(s);
    }
  return log_sum_exp(vals);
}

Potential geometric() { return Potential::constant(-std::log(kCat.lambda())); }

}  // namespace

TEST(OrbitSum, CountsMatchLucasOracle) {
  for (int n = 1; n <= 16; ++n)
    EXPECT_EQ(static_cast<i64>(OrbitSums(Potential::constant(0), kCat, n).size()), fix_count_oracle(n));
}

TEST(OrbitSum, ZeroPotentialAtTwelve) {
  double p = pressure_orbit_sum(Potential::constant(0), kCat, 12);
  EXPECT_NEAR(p, std::log(320.0) / 12, 1e-13);
  EXPECT_NEAR(p, kLogGolden, 0.06);
}

TEST(OrbitSum, ConstantShift) {
  auto phi = Potential::cosine(0.3);
  for (int n : {3, 7, 10}) {
    double base = pressure_orbit_sum(Potential::constant(0), kCat, n);
    EXPECT_NEAR(pressure_orbit_sum(Potential::constant(0.37), kCat, n), base + 0.37, 1e-13);
    EXPECT_NEAR(pressure_orbit_sum(phi.shifted(-0.2), kCat, n), pressure_orbit_sum(phi, kCat, n) - 0.2, 1e-13);
  }
}

TEST(OrbitSum, PeriodOneIsTheOrigin) {
  auto phi = Potential({{{1, 0}, 0.3, 0.0}, {{1, 1}, -0.2, 0.1}}, 0.05);
  EXPECT_NEAR(pressure_orbit_sum(phi, kCat, 1), phi(Vec2{0, 0}), 1e-15);
}

TEST(OrbitSum, MatchesBruteForce) {
  auto phi = Potential({{{1, 0}, 0.3, 0.0}, {{1, 2}, -0.1, 0.2}}, 0.1);
  for (int n = 2; n <= 6; ++n) EXPECT_NEAR(OrbitSums(phi, kCat, n).log_partition(), brute_log_partition(phi, n), 1e-9);
}

TEST(OrbitRatio, ZeroPotentialUsesExactCounts) {
  const double exact = std::log(841.0 / 521.0);
  EXPECT_EQ(fix_count_oracle(14), 841);
  EXPECT_EQ(fix_count_oracle(13), 521);
  EXPECT_NEAR(pressure_orbit_ratio(Potential::constant(0), kCat, 14), exact, 1e-13);
  // the -1 - det^n correction decays like lambda^-n
  EXPECT_NEAR(pressure_orbit_ratio(Potential::constant(0), kCat, 22), kLogGolden, 1e-4);
  EXPECT_NEAR(pressure_orbit_ratio(Potential::constant(0), kCat, 14), kLogGolden, 2.5e-3);
}

TEST(OrbitRatio, ConstantShift) {
  auto phi = Potential::cosine(0.3);
  EXPECT_NEAR(pressure_orbit_ratio(phi.shifted(0.4), kCat, 12), pressure_orbit_ratio(phi, kCat, 12) + 0.4, 1e-12);
}

TEST(OrbitRatio, AgreesWithTransferOperator) {
  for (auto phi : {Potential::cosine(0.3), Potential::cosine(0.3, {0, 1}), Potential::cosine(0.3, {1, 1}),
                   Potential::cosine(0.3).shifted(-0.5)})
    EXPECT_NEAR(pressure_orbit_ratio(phi, kCat, 18), pressure_transfer_operator(phi, cat_coding(), 10), 1e-3);
  // Z_n(phi o M_2) is lumpy when 3 | n, since the 2-torsion then lies in Fix(L^n)
  auto phi2 = Potential::cosine(0.3).compose_Mk(2);
  EXPECT_NEAR(pressure_orbit_ratio(phi2, kCat, 20), pressure_transfer_operator(phi2, cat_coding(), 14), 1e-3);
  EXPECT_GT(std::abs(pressure_orbit_ratio(phi2, kCat, 18) - pressure_transfer_operator(phi2, cat_coding(), 14)), 1e-2);
  // a richer potential needs more depth than 10
  auto rich = Potential({{{1, 2}, 0.1, 0.2}, {{0, 1}, 0.2, 0.0}}, 0.0);
  EXPECT_NEAR(pressure_orbit_ratio(rich, kCat, 18), pressure_transfer_operator(rich, cat_coding(), 16), 1e-3);
}

TEST(Transfer, PartitionIndependence) {
  auto phi = Potential::cosine(0.3);
  auto refined = build_partition(kCat, {0, 1, 8});
  auto other = build_partition(kCat, {1, 0, 8});
  // one more refinement level is worth two symbols of depth
  for (int m : {8, 10, 12})
    EXPECT_NEAR(pressure_transfer_operator(phi, refined, m), pressure_transfer_operator(phi, cat_coding(), m + 2), 1e-4);
  EXPECT_NEAR(pressure_transfer_operator(phi, other, 12), pressure_transfer_operator(phi, cat_coding(), 14), 1e-4);
}

TEST(Transfer, DepthErrorEnvelopeDecays) {
  for (auto phi : {Potential::cosine(0.3), Potential({{{1, 2}, 0.1, 0.2}, {{0, 1}, 0.2, 0.0}}, 0.0)}) {
    std::vector<double> p(19);
    for (int m = 6; m <= 18; ++m) p[m] = pressure_transfer_operator(phi, cat_coding(), m);
    auto block = [&](int lo, int hi) {
      double r = 0;
      for (int m = lo; m <= hi; ++m) r = std::max(r, std::abs(p[m + 2] - p[m]));
      return r;
    };
    EXPECT_LT(block(10, 13), block(6, 9) / 2);
    EXPECT_LT(block(14, 16), block(10, 13) / 2);
  }
}

TEST(Curve, ZeroPotentialIsFlat) {
  auto c = pressure_curve(Potential::constant(0), kCat, uniform_grid(-1, 1, 0.25), PressureMethod::transfer_operator,
                          8, &cat_coding());
  for (double v : c.values) EXPECT_NEAR(v, kLogGolden, 1e-10);
  auto s = pressure_curve(Potential::constant(0), kCat, uniform_grid(-1, 1, 0.25), PressureMethod::orbit_sum, 10);
  for (double v : s.values) EXPECT_NEAR(v, std::log(double(fix_count_oracle(10))) / 10, 1e-13);
}

TEST(Curve, GeometricPotentialIsAffine) {
  auto grid = default_grid();
  auto c = pressure_curve(geometric(), kCat, grid, PressureMethod::transfer_operator, 10, &cat_coding());
  ASSERT_EQ(c.size(), 81u);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_NEAR(c.values[i], (1 - grid[i]) * kLogGolden, 1e-9);
  EXPECT_NEAR(c.values[60], 0.0, 1e-6);
  EXPECT_NEAR(grid[60], 1.0, 1e-15);
  EXPECT_NEAR(c.min_second_difference, 0.0, 1e-9);
}

TEST(Curve, StrictConvexityForCosine) {
  auto phi = normalize_to_zero_pressure(Potential::cosine(0.3), kCat, PressureMethod::transfer_operator, 10,
                                        &cat_coding());
  auto grid = uniform_grid(-2, 2, 0.25);
  for (auto method : {PressureMethod::orbit_sum, PressureMethod::transfer_operator}) {
    auto c = pressure_curve(phi, kCat, grid, method, 12, &cat_coding());
    EXPECT_GT(c.min_second_difference, 0.0) << to_string(method);
    for (std::size_t i = 1; i + 1 < c.size(); ++i) EXPECT_GT(c.values[i + 1] - 2 * c.values[i] + c.values[i - 1], 0.0);
  }
}

TEST(Curve, MonotoneInConstant) {
  auto phi = Potential::cosine(0.3);
  auto grid = uniform_grid(0, 2, 0.5);
  auto a = pressure_curve(phi, kCat, grid, PressureMethod::orbit_ratio, 14);
  auto b = pressure_curve(phi.shifted(0.1), kCat, grid, PressureMethod::orbit_ratio, 14);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_NEAR(b.values[i] - a.values[i], 0.1 * grid[i], 1e-12);
}

TEST(Curve, CrossResiduals) {
  auto phi = Potential::cosine(0.3);
  auto grid = uniform_grid(-1, 1, 0.5);
  auto t = pressure_curve(phi, kCat, grid, PressureMethod::transfer_operator, 10, &cat_coding());
  auto r = pressure_curve(phi, kCat, grid, PressureMethod::orbit_ratio, 18);
  auto tc = with_cross_residuals(t, r);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_EQ(tc.residuals[i], std::abs(t.values[i] - r.values[i]));
  EXPECT_LT(tc.max_residual(), 1e-3);
  EXPECT_THROW(with_cross_residuals(t, pressure_curve(phi, kCat, uniform_grid(-1, 1, 0.25),
                                                      PressureMethod::orbit_ratio, 10)),
               std::invalid_argument);
}

TEST(Normalize, ZeroPotentialGivesMinusEntropy) {
  auto n = normalize_to_zero_pressure(Potential::constant(0), kCat, PressureMethod::transfer_operator, 10,
                                      &cat_coding());
  EXPECT_TRUE(n.is_constant());
  EXPECT_NEAR(n.constant_term(), -kLogGolden, 1e-10);
}

TEST(Normalize, GeometricUnchangedAndIdempotent) {
  auto g = normalize_to_zero_pressure(geometric(), kCat, PressureMethod::transfer_operator, 8, &cat_coding());
  EXPECT_NEAR(g.constant_term(), geometric().constant_term(), 1e-10);
  auto phi = Potential::cosine(0.3);
  for (auto method : {PressureMethod::orbit_ratio, PressureMethod::transfer_operator}) {
    auto once = normalize_to_zero_pressure(phi, kCat, method, 12, &cat_coding());
    auto twice = normalize_to_zero_pressure(once, kCat, method, 12, &cat_coding());
    EXPECT_NEAR(twice.constant_term(), once.constant_term(), 1e-10);
    EXPECT_NEAR(pressure(once, kCat, method, 12, &cat_coding()), 0.0, 1e-10);
  }
}

TEST(Lyapunov, GeometricSlope) {
  auto c = pressure_curve(geometric(), kCat, default_grid(), PressureMethod::transfer_operator, 6, &cat_coding());
  EXPECT_NEAR(lyapunov_from_pressure(c, 1.0), kLogGolden, 1e-9);
  EXPECT_NEAR(lyapunov_from_pressure(c, 0.0), kLogGolden, 1e-9);
  EXPECT_GT(lyapunov_from_pressure(c, -1.5), 0.0);
}

TEST(Lyapunov, ErrorsAndCosine) {
  auto coarse = pressure_curve(geometric(), kCat, uniform_grid(-1, 1, 0.2), PressureMethod::transfer_operator, 6,
                               &cat_coding());
  EXPECT_THROW(lyapunov_from_pressure(coarse, 0.2), GridTooCoarse);
  auto fine = pressure_curve(geometric(), kCat, uniform_grid(-1, 1, 0.1), PressureMethod::transfer_operator, 6,
                             &cat_coding());
  EXPECT_THROW(lyapunov_from_pressure(fine, 1.0), std::invalid_argument);
  EXPECT_THROW(lyapunov_from_pressure(fine, 0.05), std::invalid_argument);
  // a normalized cosine: -P'(1) = -int phi d mu_phi > 0
  auto phi = normalize_to_zero_pressure(Potential::cosine(0.3), kCat, PressureMethod::orbit_ratio, 18);
  auto c = pressure_curve(phi, kCat, uniform_grid(0, 2, 0.05), PressureMethod::orbit_ratio, 18);
  EXPECT_GT(lyapunov_from_pressure(c, 1.0), 0.0);
}

TEST(Grid, ParseAndDefault) {
  auto g = parse_grid("-2:2:0.05");
  EXPECT_EQ(g, default_grid());
  EXPECT_EQ(g.size(), 81u);
  EXPECT_EQ(g.front(), -2.0);
  EXPECT_NEAR(g.back(), 2.0, 1e-15);
  EXPECT_EQ(parse_grid("0:1:0.5"), (std::vector<double>{0, 0.5, 1}));
  EXPECT_THROW(parse_grid("0:1"), std::invalid_argument);
  EXPECT_THROW(parse_grid("0:x:1"), std::invalid_argument);
  EXPECT_THROW(parse_grid("0:1:0"), std::invalid_argument);
}

TEST(Methods, ParseNames) {
  EXPECT_EQ(parse_method("ratio"), PressureMethod::orbit_ratio);
  EXPECT_EQ(parse_method("eigen"), PressureMethod::transfer_operator);
  EXPECT_EQ(parse_method(to_string(PressureMethod::orbit_sum)), PressureMethod::orbit_sum);
  EXPECT_THROW(parse_method("spline"), std::invalid_argument);
}

TEST(Csv, HeaderAndRoundTrip) {
  auto c = pressure_curve(Potential::cosine(0.3), kCat, uniform_grid(0, 1, 0.5), PressureMethod::orbit_ratio, 10);
  std::ostringstream os;
  write_csv(os, c);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "t,P,method,order,residual");
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::getline(is, line);
    std::stringstream ls(line);
    std::string f[5];
    for (auto& x : f) std::getline(ls, x, ',');
    EXPECT_EQ(std::stod(f[0]), c.t_grid[i]);
    EXPECT_EQ(std::stod(f[1]), c.values[i]);
    EXPECT_EQ(f[2], "orbit_ratio");
    EXPECT_EQ(f[3], "10");
    EXPECT_EQ(std::stod(f[4]), c.residuals[i]);
  }
}
