#pragma once

// Real trigonometric polynomials on T^2, Birkhoff sums, the M_k pullback and
// the homoclinic Radon-Nikodym cocycle theta_v.

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "arith.hpp"
#include "torus.hpp"

namespace anosov {

struct TrigTerm {
  std::array<i64, 2> m{0, 0};
  double c_cos = 0.0;
  double c_sin = 0.0;

  bool operator==(const TrigTerm&) const = default;
};

/// phi(x) = constant + sum c_cos cos(2 pi m.x) + c_sin sin(2 pi m.x)
class Potential {
public:
  Potential() = default;
  Potential(std::vector<TrigTerm> terms, double constant)
      : terms_(std::move(terms)), constant_(constant) {}

  static Potential constant(double c) { return Potential({}, c); }
  static Potential cosine(double eps, std::array<i64, 2> m = {1, 0}) {
    return Potential({TrigTerm{m, eps, 0.0}}, 0.0);
  }

  const std::vector<TrigTerm>& terms() const { return terms_; }
  double constant_term() const { return constant_; }
  bool is_constant() const {
    for (const auto& t : terms_)
      if (t.c_cos != 0.0 || t.c_sin != 0.0) return false;
    return true;
  }

  double operator()(Vec2 x) const { return eval(x); }
  double operator()(const RationalPoint& x) const { return eval(x); }

  double eval(Vec2 x) const {
    CompensatedSum s;
    s.add(constant_);
    for (const auto& t : terms_) {
      const double phase = wrap01(static_cast<double>(t.m[0]) * x.x + static_cast<double>(t.m[1]) * x.y);
      add_term(s, t, phase);
    }
    return s.value();
  }

  /// Exact reduction of m.x mod 1 before the trigonometric evaluation.
  double eval(const RationalPoint& x) const {
    CompensatedSum s;
    s.add(constant_);
    for (const auto& t : terms_) {
      const Rational phase = x.x.times(t.m[0]) + x.y.times(t.m[1]);
      add_term(s, t, phase.to_double());
    }
    return s.value();
  }

  /// phi(x + delta) - phi(x) without cancellation for small delta.
  double difference(Vec2 x, Vec2 delta) const {
    CompensatedSum s;
    for (const auto& t : terms_) {
      const double mx = static_cast<double>(t.m[0]), my = static_cast<double>(t.m[1]);
      const double theta = wrap01(mx * x.x + my * x.y);
      const double eps = mx * delta.x + my * delta.y;
      const double half = std::sin(std::numbers::pi * eps);
      const double mid = 2.0 * std::numbers::pi * (theta + eps / 2.0);
      // cos(a+e) - cos(a) = -2 sin(a + e/2) sin(e/2), likewise for sin
      s.add(-2.0 * t.c_cos * std::sin(mid) * half);
      s.add(2.0 * t.c_sin * std::cos(mid) * half);
    }
    return s.value();
  }

  /// Lipschitz bound C3 = sum 2 pi |m| (|c_cos| + |c_sin|) for the Euclidean metric.
  double lipschitz_constant() const {
    double c = 0.0;
    for (const auto& t : terms_)
      c += 2.0 * std::numbers::pi * std::hypot(static_cast<double>(t.m[0]), static_cast<double>(t.m[1])) *
           (std::abs(t.c_cos) + std::abs(t.c_sin));
    return c;
  }
  /// Upper bound on |phi - constant|.
  double oscillation_bound() const {
    double c = 0.0;
    for (const auto& t : terms_) c += std::abs(t.c_cos) + std::abs(t.c_sin);
    return c;
  }

  /// phi o M_k: every frequency scaled by k.
  Potential compose_Mk(i64 k) const {
    if (k < 1) throw std::invalid_argument("compose_Mk: k must be >= 1");
    Potential out = *this;
    for (auto& t : out.terms_) t.m = {t.m[0] * k, t.m[1] * k};
    return out;
  }

  /// phi o A for an integer matrix A (frequencies map to A^T m).
  Potential compose_linear(const IntMatrix2& A) const {
    Potential out = *this;
    for (auto& t : out.terms_) t.m = {A.a * t.m[0] + A.c * t.m[1], A.b * t.m[0] + A.d * t.m[1]};
    return out;
  }

  Potential scaled(double s) const {
    Potential out = *this;
    out.constant_ *= s;
    for (auto& t : out.terms_) {
      t.c_cos *= s;
      t.c_sin *= s;
    }
    return out;
  }
  Potential shifted(double c) const {
    Potential out = *this;
    out.constant_ += c;
    return out;
  }
  Potential operator+(const Potential& o) const {
    Potential out = *this;
    out.constant_ += o.constant_;
    out.terms_.insert(out.terms_.end(), o.terms_.begin(), o.terms_.end());
    return out;
  }
  Potential operator-(const Potential& o) const { return *this + o.scaled(-1.0); }

  bool operator==(const Potential&) const = default;

private:
  static void add_term(CompensatedSum& s, const TrigTerm& t, double phase) {
    const double a = 2.0 * std::numbers::pi * phase;
    if (t.c_cos != 0.0) s.add(t.c_cos * std::cos(a));
    if (t.c_sin != 0.0) s.add(t.c_sin * std::sin(a));
  }

  std::vector<TrigTerm> terms_;
  double constant_ = 0.0;
};

/// u - u o L: a coboundary for L.
inline Potential coboundary(const Potential& u, const ToralAutomorphism& L) {
  return u - u.compose_linear(L.matrix());
}

struct HolderData {
  double C3 = 0.0;
  double alpha = 1.0;
  double C1 = 0.0;
  double C2 = 1.0;
};

inline HolderData holder_data(const Potential& phi, const HomoclinicVector& v) {
  // L is linear, so unstable vectors grow exactly like lambda^n and C2 = 1.
  return {phi.lipschitz_constant(), 1.0, v.decay_constant, 1.0};
}

// ---------------------------------------------------------------------------
// Birkhoff sums

inline double birkhoff_sum(const Potential& phi, const ToralAutomorphism& L,
                           RationalPoint x, int n) {
  if (n < 1) throw std::invalid_argument("birkhoff_sum: n must be >= 1");
  CompensatedSum s;
  for (int k = 0; k < n; ++k) {
    s.add(phi(x));
    x = L.apply(x);
  }
  return s.value();
}

inline double birkhoff_sum(const Potential& phi, const ToralAutomorphism& L, Vec2 x, int n) {
  if (n < 1) throw std::invalid_argument("birkhoff_sum: n must be >= 1");
  CompensatedSum s;
  for (int k = 0; k < n; ++k) {
    s.add(phi(x));
    x = L.apply(x);
  }
  return s.value();
}

// ---------------------------------------------------------------------------
// theta_v(x) = exp(sum_n [phi(L^n(x + v)) - phi(L^n x)])

struct ThetaValue {
  double value = 1.0;
  double log_value = 0.0;
  double tail_bound = 0.0;  // bound on the omitted part of log_value
};

inline ThetaValue theta_v(const Potential& phi, const ToralAutomorphism& L,
                          const HomoclinicVector& v, Vec2 x, int N = 40) {
  if (N < 1) throw std::invalid_argument("theta_v: N must be >= 1");
  if (phi.is_constant() || v.decay_constant == 0.0) return {};
  CompensatedSum s;
  s.add(phi.difference(x, v.offset(L, 0)));
  Vec2 fwd = x, bwd = x;
  for (int n = 1; n <= N; ++n) {
    fwd = L.apply(fwd);
    bwd = L.apply_inverse(bwd);
    s.add(phi.difference(fwd, v.offset(L, n)));
    s.add(phi.difference(bwd, v.offset(L, -n)));
  }
  const double inv = 1.0 / L.lambda();
  ThetaValue out;
  out.log_value = s.value();
  out.value = std::exp(out.log_value);
  out.tail_bound = 2.0 * phi.lipschitz_constant() * v.decay_constant * std::pow(inv, N) / (1.0 - inv);
  return out;
}

}  // namespace anosov
