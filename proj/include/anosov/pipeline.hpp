#pragma once

// End-to-end runs: the rigidity counterexample and the realization report.

#include <optional>
#include <random>
#include <string>

#include "anosov/pressure.hpp"
#include "anosov/realization.hpp"
#include "anosov/spectrum.hpp"

namespace anosov {

inline constexpr double kCurveTol = 5e-3;
inline constexpr double kSpecTol = 1e-6;
inline constexpr double kDegenerateTol = 1e-9;

struct CounterexampleConfig {
  IntMatrix2 matrix{1, 1, 1, 0};
  Potential psi = Potential::cosine(0.3);
  int k = 2;
  std::vector<double> t_grid = default_grid();
  int depth = 14;        // transfer operator
  int order = 20;        // orbit ratio
  int max_period = 6;
  double curve_tol = kCurveTol;
  double spec_tol = kSpecTol;
};

struct Verdict {
  bool reproduced = false;
  std::string reason;  // empty when reproduced

  std::string label() const { return reproduced ? "reproduced" : "failed"; }
  bool operator==(const Verdict&) const = default;
};

struct CounterexampleReport {
  IntMatrix2 matrix;
  Potential psi;
  int k = 2;
  double normalization = 0.0;  // phi = psi + normalization
  Potential phi, phi_k;
  int depth = 0, order = 0;
  double curve_tol = kCurveTol, spec_tol = kSpecTol;

  // transfer-operator curves, residuals measured against the orbit-ratio curves
  PressureCurve pressure_curve_phi, pressure_curve_phi2;
  // orbit-ratio curves, residuals measured against the transfer-operator curves
  PressureCurve ratio_curve_phi, ratio_curve_phi2;
  double max_curve_gap = 0.0;  // over both methods
  double transfer_gap = 0.0, ratio_gap = 0.0;

  int max_period = 0;
  std::optional<SpectrumWitness> spectrum_witness;
  std::vector<RationalPoint> witness_points;  // Fix(L^period), unsorted order of the enumeration
  double condition_check = 0.0;
  Verdict verdict;

  bool operator==(const CounterexampleReport&) const;
};

inline bool operator==(const SpectrumWitness& a, const SpectrumWitness& b) {
  return a.period == b.period && a.first == b.first && a.second == b.second && a.gap == b.gap;
}

inline bool CounterexampleReport::operator==(const CounterexampleReport& o) const {
  auto same_curve = [](const PressureCurve& a, const PressureCurve& b) {
    return a.t_grid == b.t_grid && a.values == b.values && a.residuals == b.residuals && a.method == b.method &&
           a.order == b.order && a.potential_id == b.potential_id &&
           a.min_second_difference == b.min_second_difference;
  };
  return matrix == o.matrix && psi == o.psi && k == o.k && normalization == o.normalization && phi == o.phi &&
         phi_k == o.phi_k && depth == o.depth && order == o.order && curve_tol == o.curve_tol &&
         spec_tol == o.spec_tol && same_curve(pressure_curve_phi, o.pressure_curve_phi) &&
         same_curve(pressure_curve_phi2, o.pressure_curve_phi2) && same_curve(ratio_curve_phi, o.ratio_curve_phi) &&
         same_curve(ratio_curve_phi2, o.ratio_curve_phi2) && max_curve_gap == o.max_curve_gap &&
         transfer_gap == o.transfer_gap && ratio_gap == o.ratio_gap && max_period == o.max_period &&
         spectrum_witness == o.spectrum_witness && witness_points == o.witness_points &&
         condition_check == o.condition_check && verdict == o.verdict;
}

/// phi(0,0) minus the mean of phi over the three points of order two.
inline double period_three_condition(const Potential& phi) {
  const double orbit = phi({0.5, 0.0}) + phi({0.5, 0.5}) + phi({0.0, 0.5});
  return phi({0.0, 0.0}) - orbit / 3.0;
}

inline double max_gap(const PressureCurve& a, const PressureCurve& b) {
  if (a.t_grid != b.t_grid) throw std::invalid_argument("max_gap: curves on different grids");
  double g = 0;
  for (std::size_t i = 0; i < a.size(); ++i) g = std::max(g, std::abs(a.values[i] - b.values[i]));
  return g;
}

inline CounterexampleReport run_counterexample(const CounterexampleConfig& cfg) {
  if (cfg.k < 1) throw std::invalid_argument("run_counterexample: k must be >= 1");
  CounterexampleReport rep;
  rep.matrix = cfg.matrix;
  rep.psi = cfg.psi;
  rep.k = cfg.k;
  rep.depth = cfg.depth;
  rep.order = cfg.order;
  rep.curve_tol = cfg.curve_tol;
  rep.spec_tol = cfg.spec_tol;
  rep.max_period = cfg.max_period;

  const double cond = period_three_condition(cfg.psi);
  if (std::abs(cond) < kDegenerateTol)
    throw ConditionDegenerate("phi(0,0) equals the mean over the order-two points (" + format_double(cond) + ")");
  rep.condition_check = cond;

  const ToralAutomorphism L(cfg.matrix);
  const MarkovCoding coding = build_partition(L);
  rep.phi = normalize_to_zero_pressure(cfg.psi, L, PressureMethod::transfer_operator, cfg.depth, &coding);
  rep.normalization = rep.phi.constant_term() - cfg.psi.constant_term();
  rep.phi_k = rep.phi.compose_Mk(cfg.k);

  auto t1 = transfer_curve(rep.phi, coding, cfg.t_grid, cfg.depth);
  auto t2 = transfer_curve(rep.phi_k, coding, cfg.t_grid, cfg.depth);
  auto r1 = orbit_curve(rep.phi, L, cfg.t_grid, PressureMethod::orbit_ratio, cfg.order);
  auto r2 = orbit_curve(rep.phi_k, L, cfg.t_grid, PressureMethod::orbit_ratio, cfg.order);
  t1.potential_id = r1.potential_id = "phi";
  t2.potential_id = r2.potential_id = "phi_k";
  rep.pressure_curve_phi = with_cross_residuals(t1, r1);
  rep.pressure_curve_phi2 = with_cross_residuals(t2, r2);
  rep.ratio_curve_phi = with_cross_residuals(r1, t1);
  rep.ratio_curve_phi2 = with_cross_residuals(r2, t2);
  rep.transfer_gap = max_gap(t1, t2);
  rep.ratio_gap = max_gap(r1, r2);
  rep.max_curve_gap = std::max(rep.transfer_gap, rep.ratio_gap);

  auto s1 = unmarked_spectrum(rep.phi, L, cfg.max_period);
  auto s2 = unmarked_spectrum(rep.phi_k, L, cfg.max_period);
  rep.spectrum_witness = compare_spectra(s1, s2);
  if (rep.spectrum_witness) rep.witness_points = periodic_points(L, rep.spectrum_witness->period);

  std::string why;
  if (!(rep.max_curve_gap <= cfg.curve_tol)) why = "pressure curves differ by " + format_double(rep.max_curve_gap);
  else if (!rep.spectrum_witness || rep.spectrum_witness->gap < cfg.spec_tol)
    why = "spectra agree up to period " + std::to_string(cfg.max_period);
  else if (std::abs(cond) < cfg.spec_tol / 4)
    why = "period-three condition " + format_double(cond) + " below tolerance";
  rep.verdict = {why.empty(), why};
  return rep;
}

// ---------------------------------------------------------------------------
// realization report

struct RealizationConfig {
  IntMatrix2 matrix{1, 1, 1, 0};
  Potential psi = Potential::cosine(0.3);
  int depth = 10;
  int n_max = 8;
  std::vector<int> cohomology_depths{8, 10, 12};
  int cohomology_period = 8;
  int samples = 64;
  std::uint64_t seed = 1;
};

struct LebesgueCalibration {
  int depth = 0;
  double xi_affine_error = 0.0;    // max |xi - affine| over samples, both coordinates
  double inverse_g_error = 0.0;    // max |1/g - lambda| on futures 0 0 ...
  double livsic_error = 0.0;       // |M - 1|
  double cohomology_residual = 0.0;
  bool operator==(const LebesgueCalibration&) const = default;
};

struct RealizationReport {
  IntMatrix2 matrix;
  Potential psi, phi;
  double normalization = 0.0;
  int depth = 0;
  LivsicReport livsic;
  std::vector<CohomologyReport> cohomology;
  ExpansionReport expansion;
  LebesgueCalibration lebesgue;
  std::uint64_t seed = 0;
};

namespace detail {

inline std::vector<Vec2> sample_A0(const ToralAutomorphism& L, const MarkovCoding& coding, int count,
                                   std::uint64_t seed) {
  const Rect& r = coding.rectangles()[coding.zero_symbol()];
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.02, 0.98);
  std::vector<Vec2> out;
  for (int i = 0; i < count; ++i) out.push_back(mod1(L.from_us(r.u0 + U(rng) * r.wu(), r.s0 + U(rng) * r.ws())));
  return out;
}

}  // namespace detail

inline LebesgueCalibration lebesgue_calibration(const ToralAutomorphism& L, const MarkovCoding& coding, int depth,
                                                int n_max, int samples, std::uint64_t seed) {
  LebesgueCalibration cal;
  cal.depth = depth;
  const Potential geo = Potential::constant(-std::log(L.lambda()));
  auto G = equilibrium(coding, geo, depth);
  GFunction gf(G);
  XiChart X(G, coding);
  const Rect& r = coding.rectangles()[coding.zero_symbol()];
  const double area = L.basis_area();
  for (Vec2 x : detail::sample_A0(L, coding, samples, seed)) {
    auto us = X.local(x);
    auto im = X(x);
    cal.xi_affine_error = std::max({cal.xi_affine_error, std::abs(im.xi1 - (us[0] - r.u0) * r.ws() * area),
                                    std::abs(im.xi2 - (us[1] - r.s0) * r.wu() * area)});
  }
  const int z = coding.zero_symbol();
  for (std::size_t i = 0; i < gf.size(); ++i) {
    const auto& w = gf.word(i);
    if (w[0] == z && w[1] == z) cal.inverse_g_error = std::max(cal.inverse_g_error, std::abs(1.0 / gf.value(i) - L.lambda()));
  }
  cal.livsic_error = std::abs(livsic_bound_report(G, coding, gf, geo, std::min(n_max, depth - 2)).M - 1.0);
  cal.cohomology_residual = cohomology_residual(G, coding, gf, geo, L, std::min(8, depth)).max_residual;
  return cal;
}

inline RealizationReport run_realization(const RealizationConfig& cfg) {
  RealizationReport rep;
  rep.matrix = cfg.matrix;
  rep.psi = cfg.psi;
  rep.depth = cfg.depth;
  rep.seed = cfg.seed;
  const ToralAutomorphism L(cfg.matrix);
  const MarkovCoding coding = build_partition(L);
  const int deep = std::max(cfg.depth, 14);
  rep.phi = normalize_to_zero_pressure(cfg.psi, L, PressureMethod::transfer_operator, deep, &coding);
  rep.normalization = rep.phi.constant_term() - cfg.psi.constant_term();

  auto G = equilibrium(coding, rep.phi, cfg.depth);
  GFunction gf(G);
  rep.livsic = livsic_bound_report(G, coding, gf, rep.phi, std::min(cfg.n_max, cfg.depth - 2));
  for (int m : cfg.cohomology_depths) {
    auto Gm = equilibrium(coding, rep.phi, m);
    rep.cohomology.push_back(cohomology_residual(Gm, coding, GFunction(Gm), rep.phi, L, cfg.cohomology_period));
  }
  rep.expansion = expansion_steps(coding, gf, detail::sample_A0(L, coding, cfg.samples, cfg.seed));
  rep.lebesgue = lebesgue_calibration(L, coding, cfg.depth, cfg.n_max, cfg.samples, cfg.seed);
  return rep;
}

}  // namespace anosov
