#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "anosov/potential.hpp"

namespace anosov {

inline constexpr int kMaxSpectrumPeriod = 20;

/// The multiset {(S_n phi(x), n) : L^n x = x, n <= N}, one entry per fixed
/// point of L^n, values sorted within each period.
struct OrbitSpectrum {
  int max_period = 0;
  std::map<int, std::vector<double>> values;

  const std::vector<double>& at(int n) const { return values.at(n); }
  std::size_t count(int n) const { return values.at(n).size(); }
  bool operator==(const OrbitSpectrum&) const = default;
};

inline std::vector<double> period_values(const Potential& phi, const ToralAutomorphism& L, int n) {
  auto pts = periodic_points(L, n);
  std::vector<double> v;
  v.reserve(pts.size());
  for (const auto& x : pts) v.push_back(birkhoff_sum(phi, L, x, n));
  std::sort(v.begin(), v.end());
  return v;
}

inline OrbitSpectrum unmarked_spectrum(const Potential& phi, const ToralAutomorphism& L, int N) {
  if (N < 1 || N > kMaxSpectrumPeriod)
    throw std::invalid_argument("unmarked_spectrum: max period must lie in [1, 20]");
  OrbitSpectrum s;
  s.max_period = N;
  for (int n = 1; n <= N; ++n) s.values[n] = period_values(phi, L, n);
  return s;
}

struct SpectrumWitness {
  int period = 0;
  std::vector<double> first, second;
  double gap = 0.0;  // largest difference after sorting both sides
};

/// Multisets of reals are compared by sorting; for equal sizes the sorted
/// matching minimizes the largest pairwise difference.
inline double multiset_gap(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double g = 0;
  for (std::size_t i = 0; i < a.size(); ++i) g = std::max(g, std::abs(a[i] - b[i]));
  return g;
}

/// Empty result means equal within tol; otherwise the smallest differing period.
inline std::optional<SpectrumWitness> compare_spectra(const OrbitSpectrum& s1, const OrbitSpectrum& s2,
                                                      double tol = 1e-9) {
  if (s1.max_period != s2.max_period) throw std::invalid_argument("compare_spectra: max periods differ");
  for (int n = 1; n <= s1.max_period; ++n) {
    const auto &a = s1.at(n), &b = s2.at(n);
    double g = multiset_gap(a, b);
    if (g > tol) return SpectrumWitness{n, a, b, g};
  }
  return std::nullopt;
}

}  // namespace anosov
