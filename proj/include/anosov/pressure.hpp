#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <memory>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "anosov/gibbs.hpp"

namespace anosov {

enum class PressureMethod { orbit_sum, orbit_ratio, transfer_operator };

inline std::string to_string(PressureMethod m) {
  switch (m) {
    case PressureMethod::orbit_sum: return "orbit_sum";
    case PressureMethod::orbit_ratio: return "orbit_ratio";
    case PressureMethod::transfer_operator: return "transfer_operator";
  }
  return "unknown";
}

/// Accepts the canonical names plus the short CLI spellings sum/ratio/eigen.
inline PressureMethod parse_method(std::string_view s) {
  if (s == "orbit_sum" || s == "sum") return PressureMethod::orbit_sum;
  if (s == "orbit_ratio" || s == "ratio") return PressureMethod::orbit_ratio;
  if (s == "transfer_operator" || s == "eigen" || s == "transfer") return PressureMethod::transfer_operator;
  throw std::invalid_argument("unknown pressure method '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Periodic-orbit partition functions

/// Birkhoff sums S_n phi over Fix(L^n), enumerated exactly.
class OrbitSums {
public:
  OrbitSums(const Potential& phi, const ToralAutomorphism& L, int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("OrbitSums: n must be >= 1");
    auto pts = periodic_points(L, n);
    sums_.reserve(pts.size());
    for (const auto& x : pts) sums_.push_back(birkhoff_sum(phi, L, x, n));
  }

  int order() const { return n_; }
  std::size_t size() const { return sums_.size(); }
  const std::vector<double>& sums() const { return sums_; }

  /// log Z_n(t phi) = log sum_x exp(t S_n phi(x))
  double log_partition(double t = 1.0) const {
    std::vector<double> v(sums_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = t * sums_[i];
    return log_sum_exp(v);
  }

private:
  int n_;
  std::vector<double> sums_;
};

inline double pressure_orbit_sum(const Potential& phi, const ToralAutomorphism& L, int n) {
  return OrbitSums(phi, L, n).log_partition() / n;
}

inline double pressure_orbit_ratio(const Potential& phi, const ToralAutomorphism& L, int n) {
  if (n < 2) throw std::invalid_argument("pressure_orbit_ratio: n must be >= 2");
  return OrbitSums(phi, L, n).log_partition() - OrbitSums(phi, L, n - 1).log_partition();
}

/// Leading eigenvalue of the depth-m transfer matrix for phi at cylinder centers.
inline double pressure_transfer_operator(const Potential& phi, const MarkovCoding& coding, int depth) {
  WordSpace space(coding.sft(), depth);
  return leading_log_eigenvalue(space, cylinder_values(space, coding, phi));
}

// ---------------------------------------------------------------------------
// Curves

struct PressureCurve {
  std::vector<double> t_grid;
  std::vector<double> values;
  std::vector<double> residuals;  // a posteriori error estimate per point
  PressureMethod method = PressureMethod::transfer_operator;
  int order = 0;
  std::string potential_id;
  double min_second_difference = 0.0;

  std::size_t size() const { return t_grid.size(); }
  double max_residual() const {
    double r = 0;
    for (double x : residuals) r = std::max(r, x);
    return r;
  }
};

/// Inclusive uniform grid a, a+h, ..., b. Points are a + i h, not accumulated.
inline std::vector<double> uniform_grid(double a, double b, double h) {
  if (!(h > 0) || !(b >= a)) throw std::invalid_argument("uniform_grid: need h > 0 and b >= a");
  const auto n = static_cast<std::size_t>(std::floor((b - a) / h + 1e-9));
  std::vector<double> out(n + 1);
  for (std::size_t i = 0; i <= n; ++i) out[i] = a + static_cast<double>(i) * h;
  return out;
}

inline std::vector<double> default_grid() { return uniform_grid(-2.0, 2.0, 0.05); }

/// "a:b:step"
inline std::vector<double> parse_grid(std::string_view spec) {
  double v[3];
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    std::size_t end = i < 2 ? spec.find(':', pos) : spec.size();
    if (end == std::string_view::npos) throw std::invalid_argument("t-grid must be a:b:step");
    std::string part(spec.substr(pos, end - pos));
    std::size_t used = 0;
    try {
      v[i] = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size()) throw std::invalid_argument("bad t-grid component '" + part + "'");
    pos = end + 1;
  }
  return uniform_grid(v[0], v[1], v[2]);
}

inline double min_second_difference(const std::vector<double>& y) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < y.size(); ++i) m = std::min(m, y[i + 1] - 2 * y[i] + y[i - 1]);
  return std::isfinite(m) ? m : 0.0;
}

inline constexpr double kConvexityTol = 1e-8;

namespace detail {

inline void enforce_convexity(const PressureCurve& c) {
  if (c.method == PressureMethod::orbit_ratio) return;
  if (c.min_second_difference < -kConvexityTol)
    throw NonConvex(to_string(c.method) + " curve has second difference " +
                    std::to_string(c.min_second_difference));
}

}  // namespace detail

/// Orbit-based curve. Residuals: orbit_sum is compared with the ratio estimate
/// at the same order, orbit_ratio with the ratio one order lower.
inline PressureCurve orbit_curve(const Potential& phi, const ToralAutomorphism& L,
                                 const std::vector<double>& grid, PressureMethod method, int n) {
  if (method == PressureMethod::transfer_operator) throw std::invalid_argument("orbit_curve: orbit method required");
  if (n < 3) throw std::invalid_argument("orbit_curve: order must be >= 3");
  OrbitSums zn(phi, L, n), zn1(phi, L, n - 1), zn2(phi, L, n - 2);
  PressureCurve c;
  c.t_grid = grid;
  c.method = method;
  c.order = n;
  for (double t : grid) {
    double a = zn.log_partition(t), b = zn1.log_partition(t), d = zn2.log_partition(t);
    double ratio = a - b;
    if (method == PressureMethod::orbit_sum) {
      c.values.push_back(a / n);
      c.residuals.push_back(std::abs(a / n - ratio));
    } else {
      c.values.push_back(ratio);
      c.residuals.push_back(std::abs(ratio - (b - d)));
    }
  }
  c.min_second_difference = min_second_difference(c.values);
  detail::enforce_convexity(c);
  return c;
}

/// Transfer-operator curve at depth m; residual is the change from depth m - 2.
inline PressureCurve transfer_curve(const Potential& phi, const MarkovCoding& coding,
                                    const std::vector<double>& grid, int depth) {
  if (depth < 3) throw std::invalid_argument("transfer_curve: depth must be >= 3");
  WordSpace hi(coding.sft(), depth), lo(coding.sft(), depth - 2);
  auto vh = cylinder_values(hi, coding, phi), vl = cylinder_values(lo, coding, phi);
  PressureCurve c;
  c.t_grid = grid;
  c.method = PressureMethod::transfer_operator;
  c.order = depth;
  std::vector<double> sh(vh.size()), sl(vl.size());
  for (double t : grid) {
    for (std::size_t i = 0; i < vh.size(); ++i) sh[i] = t * vh[i];
    for (std::size_t i = 0; i < vl.size(); ++i) sl[i] = t * vl[i];
    double p = leading_log_eigenvalue(hi, sh);
    c.values.push_back(p);
    c.residuals.push_back(std::abs(p - leading_log_eigenvalue(lo, sl)));
  }
  c.min_second_difference = min_second_difference(c.values);
  detail::enforce_convexity(c);
  return c;
}

inline PressureCurve pressure_curve(const Potential& phi, const ToralAutomorphism& L,
                                    const std::vector<double>& grid, PressureMethod method, int order,
                                    const MarkovCoding* coding = nullptr) {
  if (method != PressureMethod::transfer_operator) return orbit_curve(phi, L, grid, method, order);
  if (coding) return transfer_curve(phi, *coding, grid, order);
  return transfer_curve(phi, build_partition(L), grid, order);
}

/// Single pressure value by any method.
inline double pressure(const Potential& phi, const ToralAutomorphism& L, PressureMethod method, int order,
                       const MarkovCoding* coding = nullptr) {
  switch (method) {
    case PressureMethod::orbit_sum: return pressure_orbit_sum(phi, L, order);
    case PressureMethod::orbit_ratio: return pressure_orbit_ratio(phi, L, order);
    case PressureMethod::transfer_operator:
      if (coding) return pressure_transfer_operator(phi, *coding, order);
      return pressure_transfer_operator(phi, build_partition(L), order);
  }
  return 0.0;
}

/// Replace the self-estimates by the pointwise distance to an independent curve
/// on the same grid.
inline PressureCurve with_cross_residuals(PressureCurve c, const PressureCurve& reference) {
  if (reference.t_grid != c.t_grid) throw std::invalid_argument("with_cross_residuals: grids differ");
  for (std::size_t i = 0; i < c.size(); ++i) c.residuals[i] = std::abs(c.values[i] - reference.values[i]);
  return c;
}

/// Largest n <= 20 with |Fix(L^n)| around 5e4 or fewer.
inline int default_orbit_order(const ToralAutomorphism& L) {
  int n = static_cast<int>(std::floor(std::log(5e4) / std::log(L.lambda())));
  return std::clamp(n, 3, 20);
}

inline Potential normalize_to_zero_pressure(const Potential& phi, const ToralAutomorphism& L,
                                            PressureMethod method, int order,
                                            const MarkovCoding* coding = nullptr) {
  return phi.shifted(-pressure(phi, L, method, order, coding));
}

/// -(P(t0 + h) - P(t0 - h)) / 2h, h the grid step. t0 must be a grid point.
inline double lyapunov_from_pressure(const PressureCurve& curve, double t0) {
  const auto& g = curve.t_grid;
  if (g.size() < 3) throw std::invalid_argument("lyapunov_from_pressure: grid too short");
  const double h = g[1] - g[0];
  if (h > 0.1) throw GridTooCoarse("step " + std::to_string(h) + " exceeds 0.1");
  std::size_t i = 1;
  while (i + 1 < g.size() && std::abs(g[i] - t0) > 1e-9 * std::max(1.0, h)) ++i;
  if (i + 1 >= g.size()) throw std::invalid_argument("lyapunov_from_pressure: t0 is not an interior grid point");
  return -(curve.values[i + 1] - curve.values[i - 1]) / (g[i + 1] - g[i - 1]);
}

// ---------------------------------------------------------------------------
// CSV

inline std::string format_double(double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

inline void write_csv(std::ostream& os, const PressureCurve& c) {
  os << "t,P,method,order,residual\n";
  for (std::size_t i = 0; i < c.size(); ++i)
    os << format_double(c.t_grid[i]) << ',' << format_double(c.values[i]) << ',' << to_string(c.method) << ','
       << c.order << ',' << format_double(c.residuals[i]) << '\n';
}

}  // namespace anosov
