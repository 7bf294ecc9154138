#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "anosov/gibbs.hpp"

namespace anosov {

// ---------------------------------------------------------------------------
// xi coordinates on A_0
//
// xi1(x) is the mass of the part of A_0 left of the local stable fiber of x,
// xi2(x) the mass below its local unstable fiber. Future words starting at the
// zero symbol cut A_0 into columns, past words ending there cut it into rows.

struct ChartImage {
  double xi1 = 0.0;
  double xi2 = 0.0;
  Vec2 source_point;
  int depth = 0;
  double error_radius = 0.0;  // max of the two below
  double xi1_radius = 0.0;    // mass of the straddling column
  double xi2_radius = 0.0;    // mass of the straddling row
};

class XiChart {
public:
  XiChart(const GibbsApproximation& G, const MarkovCoding& coding) : coding_(&coding), depth_(G.depth()) {
    const auto& space = G.space();
    const int z = coding.zero_symbol();
    for (std::size_t i = 0; i < space.size(); ++i) {
      const auto& w = space.state(i);
      const double mass = G.weights()[i];
      if (w.front() == z) {
        auto r = coding.decode(Word{w, 0}).rect;
        cols_.push_back({r.u0, r.u1, mass});
      }
      if (w.back() == z) {
        auto r = coding.decode(Word{w, static_cast<int>(w.size()) - 1}).rect;
        rows_.push_back({r.s0, r.s1, mass});
      }
    }
    prepare(cols_, col_prefix_);
    prepare(rows_, row_prefix_);
  }

  int depth() const { return depth_; }
  double mass() const { return col_prefix_.back(); }
  std::size_t columns() const { return cols_.size(); }
  std::size_t rows() const { return rows_.size(); }

  /// Local (u, s) of x in the frame of A_0. Throws OutsideA0 off the interior.
  std::array<double, 2> local(Vec2 x) const {
    for (auto& [a, us] : coding_->locate(x, -kGeomTol))
      if (a == coding_->zero_symbol()) return us;
    throw OutsideA0("point (" + std::to_string(x.x) + ", " + std::to_string(x.y) + ") is not interior to A0");
  }

  ChartImage operator()(Vec2 x) const {
    auto us = local(x);
    auto [v1, r1] = accumulate(cols_, col_prefix_, us[0]);
    auto [v2, r2] = accumulate(rows_, row_prefix_, us[1]);
    return {v1, v2, x, depth_, std::max(r1, r2), r1, r2};
  }

  /// alpha_v(x) = xi(x + v)
  ChartImage alpha(const HomoclinicVector& v, Vec2 x) const { return (*this)(mod1(x + v.point)); }

private:
  struct Strip {
    double lo, hi, mass;
  };

  static void prepare(std::vector<Strip>& strips, std::vector<double>& prefix) {
    std::sort(strips.begin(), strips.end(), [](const Strip& a, const Strip& b) { return a.lo < b.lo; });
    prefix.assign(strips.size() + 1, 0.0);
    CompensatedSum s;
    for (std::size_t i = 0; i < strips.size(); ++i) {
      s.add(strips[i].mass);
      prefix[i + 1] = s.value();
    }
  }

  static std::pair<double, double> accumulate(const std::vector<Strip>& strips, const std::vector<double>& prefix,
                                              double t) {
    auto it = std::upper_bound(strips.begin(), strips.end(), t, [](double v, const Strip& s) { return v < s.lo; });
    if (it == strips.begin()) return {0.0, strips.front().mass};
    const std::size_t i = static_cast<std::size_t>(it - strips.begin()) - 1;
    const Strip& s = strips[i];
    const double frac = std::clamp((t - s.lo) / (s.hi - s.lo), 0.0, 1.0);
    return {prefix[i] + frac * s.mass, s.mass};
  }

  const MarkovCoding* coding_;
  int depth_;
  std::vector<Strip> cols_, rows_;
  std::vector<double> col_prefix_, row_prefix_;
};

inline ChartImage xi(const GibbsApproximation& G, const MarkovCoding& coding, Vec2 x) {
  return XiChart(G, coding)(x);
}

// ---------------------------------------------------------------------------
// Unstable derivative of L in the xi charts: 1/g of the future code

/// The unique future a_0 .. a_{len-1} of x; BoundaryCode if x has several.
inline std::vector<int> future_code(const MarkovCoding& coding, Vec2 x, int len) {
  std::vector<std::vector<int>> futures;
  for (auto& w : coding.encode(x, len)) {
    std::vector<int> f;
    for (int j = 0; j < len; ++j) f.push_back(w.at(j));
    if (std::find(futures.begin(), futures.end(), f) == futures.end()) futures.push_back(std::move(f));
  }
  if (futures.size() != 1)
    throw BoundaryCode(std::to_string(futures.size()) + " future codes of length " + std::to_string(len));
  return futures.front();
}

inline double unstable_derivative_new_charts(const MarkovCoding& coding, const GFunction& gf, Vec2 x) {
  auto f = future_code(coding, x, gf.depth());
  const int z = coding.zero_symbol();
  if (f[0] != z || f[1] != z) throw OutsideA0("derivative needs x in A0 and L(x) in A0");
  return 1.0 / gf.g(f);
}

inline double unstable_derivative_new_charts(const GibbsApproximation&, const MarkovCoding& coding,
                                             const GFunction& gf, Vec2 x) {
  return unstable_derivative_new_charts(coding, gf, x);
}

/// Sum over k < n of -log g(sigma^k omega+), omega+ of length n - 1 + depth.
inline double log_derivative_product(const GFunction& gf, const std::vector<int>& future, int n) {
  const int m = gf.depth();
  if (static_cast<int>(future.size()) < n - 1 + m) throw std::invalid_argument("future code too short");
  CompensatedSum s;
  for (int k = 0; k < n; ++k) s.add(-gf.log_g(std::vector<int>(future.begin() + k, future.begin() + k + m)));
  return s.value();
}

// ---------------------------------------------------------------------------
// Livsic boundedness: Pi = prod 1/g * exp(S_n phi) over returns to A_0

struct LivsicReport {
  int depth = 0;
  std::vector<int> periods;
  std::vector<double> per_period;  // max(Pi, 1/Pi) over the words of that length
  std::vector<double> cumulative;  // M(n): max over lengths <= n
  double M = 1.0;
  int words = 0;
  int skipped = 0;  // sample point on a boundary
};

/// Admissible words 0 a_1 .. a_{n-1} 0.
inline std::vector<std::vector<int>> return_words(const MarkovCoding& coding, int n) {
  const int z = coding.zero_symbol();
  const auto& sft = coding.sft();
  std::vector<std::vector<int>> out;
  std::vector<int> path{z};
  std::function<void()> rec = [&]() {
    if (static_cast<int>(path.size()) == n) {
      if (sft.allowed(path.back(), z)) {
        out.push_back(path);
        out.back().push_back(z);
      }
      return;
    }
    for (int b = 0; b < sft.alphabet_size; ++b)
      if (sft.allowed(path.back(), b)) {
        path.push_back(b);
        rec();
        path.pop_back();
      }
  };
  rec();
  return out;
}

inline LivsicReport livsic_bound_report(const GibbsApproximation& G, const MarkovCoding& coding,
                                        const GFunction& gf, const Potential& phi, int n_max) {
  if (n_max < 1 || n_max > G.depth() - 2)
    throw std::invalid_argument("livsic_bound_report: need 1 <= n_max <= depth - 2");
  LivsicReport rep;
  rep.depth = G.depth();
  const auto& L = coding.map();
  for (int n = 1; n <= n_max; ++n) {
    double worst = 0.0;
    for (auto& w : return_words(coding, n)) {
      Vec2 x = coding.decode(Word{w, 0}).center;
      std::vector<int> fut;
      try {
        fut = future_code(coding, x, n - 1 + gf.depth());
      } catch (const BoundaryCode&) {
        ++rep.skipped;
        continue;
      }
      ++rep.words;
      const double logpi = log_derivative_product(gf, fut, n) + birkhoff_sum(phi, L, x, n);
      worst = std::max(worst, std::abs(logpi));
    }
    rep.periods.push_back(n);
    rep.per_period.push_back(std::exp(worst));
    rep.M = std::max(rep.M, std::exp(worst));
    rep.cumulative.push_back(rep.M);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Cohomology residual: sum of log(1/g) + S_n phi around periodic orbits

struct CohomologyReport {
  int depth = 0;
  std::vector<int> periods;
  std::vector<double> per_period;  // max residual among orbits of that period
  double max_residual = 0.0;
  int orbits = 0;
  int boundary_skipped = 0;
};

inline bool on_partition_boundary(const MarkovCoding& coding, Vec2 x, int depth = 2) {
  return coding.encode(x, depth).size() != 1;
}

inline CohomologyReport cohomology_residual(const GibbsApproximation& G, const MarkovCoding& coding,
                                            const GFunction& gf, const Potential& phi,
                                            const ToralAutomorphism& L, int N) {
  if (N < 1 || N > 12) throw std::invalid_argument("cohomology_residual: period bound must lie in [1, 12]");
  CohomologyReport rep;
  rep.depth = G.depth();
  const int m = gf.depth();
  for (int n = 1; n <= N; ++n) {
    double worst = 0.0;
    for (auto& w : coding.periodic_words(n)) {
      RationalPoint x = coding.periodic_point(w);
      if (on_partition_boundary(coding, x.to_vec())) {
        ++rep.boundary_skipped;
        continue;
      }
      ++rep.orbits;
      std::vector<int> rep_word;
      while (static_cast<int>(rep_word.size()) < n - 1 + m)
        rep_word.insert(rep_word.end(), w.symbols.begin(), w.symbols.end());
      const double r = log_derivative_product(gf, rep_word, n) + birkhoff_sum(phi, L, x, n);
      worst = std::max(worst, std::abs(r));
    }
    rep.periods.push_back(n);
    rep.per_period.push_back(worst);
    rep.max_residual = std::max(rep.max_residual, worst);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Expansion: smallest n with prod_{k<n} 1/g > 2 at every sample

struct ExpansionReport {
  int steps = 0;  // 0 if not reached within the limit
  double min_product = 0.0;
};

inline ExpansionReport expansion_steps(const MarkovCoding& coding, const GFunction& gf,
                                       const std::vector<Vec2>& samples, int n_limit = 30) {
  std::vector<std::vector<int>> futures;
  for (Vec2 x : samples) {
    try {
      futures.push_back(future_code(coding, x, n_limit - 1 + gf.depth()));
    } catch (const BoundaryCode&) {
    }
  }
  if (futures.empty()) throw std::invalid_argument("expansion_steps: no usable samples");
  for (int n = 1; n <= n_limit; ++n) {
    double lo = std::numeric_limits<double>::infinity();
    for (auto& f : futures) lo = std::min(lo, log_derivative_product(gf, f, n));
    if (lo > std::log(2.0)) return {n, std::exp(lo)};
  }
  return {};
}

// ---------------------------------------------------------------------------
// Chart transitions: the derivative of xi o tau_v o xi^{-1} along the unstable
// direction is the nu^- average of rho * theta_v over the pasts of omega+.

inline double ell_integral(const GibbsApproximation& G, const MarkovCoding& coding, const Potential& phi,
                           const HomoclinicVector& v, const std::vector<int>& future, int past_len,
                           int theta_terms = 40) {
  if (future.empty() || past_len < 1) throw std::invalid_argument("ell_integral: empty words");
  const int a = future.front();
  const double la = G.log_cylinder_weight(std::vector<int>{a});
  CompensatedSum s;
  for (auto& w : coding.admissible_words(past_len)) {
    if (w.symbols.back() != a) continue;
    std::vector<int> joint = w.symbols;
    joint.insert(joint.end(), future.begin() + 1, future.end());
    const Vec2 p = coding.decode(Word{joint, past_len - 1}).center;
    const double weight = std::exp(G.log_cylinder_weight(w.symbols) - la);
    s.add(weight * product_density(G, w.symbols, future) * theta_v(phi, coding.map(), v, p, theta_terms).value);
  }
  return s.value();
}

}  // namespace anosov
