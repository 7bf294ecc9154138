#pragma once

// Hyperbolic automorphisms of the 2-torus: eigen-data, exact periodic points,
// homoclinic points, the multiplication-by-k map and bracket decomposition.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"

namespace anosov {

// ---------------------------------------------------------------------------
// Smith normal form of a 2x2 integer matrix: U * M * V = D with U, V
// unimodular and D = diag(d1, d2), 0 <= d1 | d2.

struct SmithForm {
  IntMatrix2 U;
  IntMatrix2 D;
  IntMatrix2 V;
};

inline SmithForm smith_normal_form(const IntMatrix2& M) {
  IntMatrix2 S = M, U = IntMatrix2::identity(), V = IntMatrix2::identity();
  auto swap_rows = [](IntMatrix2& X) {
    std::swap(X.a, X.c);
    std::swap(X.b, X.d);
  };
  auto swap_cols = [](IntMatrix2& X) {
    std::swap(X.a, X.b);
    std::swap(X.c, X.d);
  };
  for (int guard = 0; guard < 512; ++guard) {
    if (S.a == 0 && S.b == 0 && S.c == 0 && S.d == 0) break;
    // move the entry of least nonzero magnitude to the pivot
    i64 best = 0;
    int where = -1;
    const i64 entries[4] = {S.a, S.b, S.c, S.d};
    for (int k = 0; k < 4; ++k) {
      if (entries[k] != 0 && (where < 0 || std::abs(entries[k]) < best)) {
        best = std::abs(entries[k]);
        where = k;
      }
    }
    if (where == 2 || where == 3) {
      swap_rows(S);
      swap_rows(U);
    }
    if (where == 1 || where == 3) {
      swap_cols(S);
      swap_cols(V);
    }
    // row 1 -= q row 0
    i64 q = S.c / S.a;
    S.c -= q * S.a;
    S.d -= q * S.b;
    U.c -= q * U.a;
    U.d -= q * U.b;
    // col 1 -= q col 0
    q = S.b / S.a;
    S.b -= q * S.a;
    S.d -= q * S.c;
    V.b -= q * V.a;
    V.d -= q * V.c;
    if (S.b != 0 || S.c != 0) continue;
    if (S.d % S.a != 0) {
      // row 0 += row 1 brings d into the pivot row
      S.a += S.c;
      S.b += S.d;
      U.a += U.c;
      U.b += U.d;
      continue;
    }
    break;
  }
  if (S.a < 0) {
    S.a = -S.a;
    S.b = -S.b;
    U.a = -U.a;
    U.b = -U.b;
  }
  if (S.d < 0) {
    S.c = -S.c;
    S.d = -S.d;
    U.c = -U.c;
    U.d = -U.d;
  }
  return {U, S, V};
}

// ---------------------------------------------------------------------------

class ToralAutomorphism {
public:
  ToralAutomorphism() : ToralAutomorphism(IntMatrix2{1, 1, 1, 0}) {}

  explicit ToralAutomorphism(const IntMatrix2& m) : A_(m) {
    const i64 det = m.det();
    if (det != 1 && det != -1)
      throw NonUnimodular("|det| = " + std::to_string(std::abs(det)) + " != 1");
    const i64 t = m.trace();
    const i64 disc = t * t - 4 * det;
    if (disc <= 0 || (det == 1 && std::abs(t) == 2) || (det == -1 && t == 0))
      throw NonHyperbolic("eigenvalue on the unit circle (trace " + std::to_string(t) +
                          ", det " + std::to_string(det) + ")");
    det_sign_ = static_cast<int>(det);
    discriminant_ = disc;
    const double sigma = t > 0 ? 1.0 : -1.0;
    mu_u_ = (static_cast<double>(t) + sigma * std::sqrt(static_cast<double>(disc))) / 2.0;
    mu_s_ = static_cast<double>(det) / mu_u_;
    lambda_ = std::abs(mu_u_);
    e_u_ = eigenvector(mu_u_);
    e_s_ = eigenvector(mu_s_);
    inverse_ = IntMatrix2{m.d * det, -m.b * det, -m.c * det, m.a * det};

    const double jac = e_u_.x * e_s_.y - e_u_.y * e_s_.x;
    to_us_ = {e_s_.y / jac, -e_s_.x / jac, -e_u_.y / jac, e_u_.x / jac};
    basis_det_ = std::abs(jac);

    auto residual = [&](Vec2 e, double mu) { return (A_.apply(e) - e * mu).norm(); };
    if (residual(e_u_, mu_u_) > 1e-12 * lambda_ || residual(e_s_, mu_s_) > 1e-12 * lambda_)
      throw NonHyperbolic("eigenvector residual above 1e-12");
  }

  static ToralAutomorphism cat_map() { return ToralAutomorphism(IntMatrix2{1, 1, 1, 0}); }

  const IntMatrix2& matrix() const { return A_; }
  const IntMatrix2& inverse_matrix() const { return inverse_; }
  int det_sign() const { return det_sign_; }
  i64 trace() const { return A_.trace(); }
  i64 discriminant() const { return discriminant_; }

  /// Expanding eigenvalue modulus.
  double lambda() const { return lambda_; }
  /// Signed eigenvalues along e_u and e_s.
  double mu_u() const { return mu_u_; }
  double mu_s() const { return mu_s_; }
  Vec2 e_u() const { return e_u_; }
  Vec2 e_s() const { return e_s_; }
  /// |det [e_u e_s]|: area of the unit (u,s) square in the plane.
  double basis_area() const { return basis_det_; }

  /// Coordinates (u, s) with v = u e_u + s e_s.
  std::array<double, 2> to_us(Vec2 v) const {
    return {to_us_[0] * v.x + to_us_[1] * v.y, to_us_[2] * v.x + to_us_[3] * v.y};
  }
  Vec2 from_us(double u, double s) const { return e_u_ * u + e_s_ * s; }

  Vec2 apply(Vec2 p) const { return mod1(A_.apply(p)); }
  Vec2 apply_inverse(Vec2 p) const { return mod1(inverse_.apply(p)); }
  RationalPoint apply(const RationalPoint& p) const { return A_.apply(p); }
  RationalPoint apply_inverse(const RationalPoint& p) const { return inverse_.apply(p); }

  /// L^n for any integer n.
  Vec2 iterate(Vec2 p, int n) const {
    for (int k = 0; k < n; ++k) p = apply(p);
    for (int k = 0; k < -n; ++k) p = apply_inverse(p);
    return p;
  }
  RationalPoint iterate(RationalPoint p, int n) const {
    for (int k = 0; k < n; ++k) p = apply(p);
    for (int k = 0; k < -n; ++k) p = apply_inverse(p);
    return p;
  }

  /// |Fix(L^n)| = |det(A^n - I)|.
  i64 fixed_point_count(int n) const {
    return std::abs((A_.pow(n) - IntMatrix2::identity()).det());
  }

private:
  Vec2 eigenvector(double mu) const {
    // b != 0 for every hyperbolic matrix, so (b, mu - a) never vanishes
    Vec2 v{static_cast<double>(A_.b), mu - static_cast<double>(A_.a)};
    if (v.x < 0) v = -v;
    return v * (1.0 / v.norm());
  }

  IntMatrix2 A_;
  IntMatrix2 inverse_;
  int det_sign_ = 1;
  i64 discriminant_ = 0;
  double mu_u_ = 0.0, mu_s_ = 0.0, lambda_ = 0.0;
  Vec2 e_u_, e_s_;
  std::array<double, 4> to_us_{};
  double basis_det_ = 1.0;
};

/// Validating constructor from the four matrix entries.
inline ToralAutomorphism eigen_data(const IntMatrix2& m) { return ToralAutomorphism(m); }

// ---------------------------------------------------------------------------
// Periodic points

/// All x with L^n x = x, as exact rationals, sorted.
inline std::vector<RationalPoint> periodic_points(const ToralAutomorphism& L, int n) {
  if (n < 1) throw std::invalid_argument("periodic_points: n must be >= 1");
  const IntMatrix2 M = L.matrix().pow(n) - IntMatrix2::identity();
  if (M.det() == 0) throw DegeneratePeriod("det(A^n - I) = 0 for n = " + std::to_string(n));
  const SmithForm snf = smith_normal_form(M);
  const i64 d1 = snf.D.a, d2 = snf.D.d;
  std::vector<RationalPoint> out;
  out.reserve(static_cast<std::size_t>(d1 * d2));
  for (i64 j1 = 0; j1 < d1; ++j1)
    for (i64 j2 = 0; j2 < d2; ++j2)
      out.push_back(snf.V.apply(RationalPoint{Rational(j1, d1), Rational(j2, d2)}));
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Multiplication by k

inline RationalPoint lift_Mk(const RationalPoint& p, i64 k) {
  if (k < 1) throw std::invalid_argument("lift_Mk: k must be >= 1");
  return {p.x.times(k), p.y.times(k)};
}

inline Vec2 lift_Mk(Vec2 p, i64 k) {
  if (k < 1) throw std::invalid_argument("lift_Mk: k must be >= 1");
  return mod1(p * static_cast<double>(k));
}

// ---------------------------------------------------------------------------
// Homoclinic points
//
// For a lattice index n in Z^2 the unstable line through 0 meets the stable
// line through n at a e_u = n + b e_s. Its class v mod Z^2 is homoclinic to 0:
// L^k v = b mu_s^k e_s for k >= 0 and a mu_u^k e_u for k <= 0 (mod 1).

struct HomoclinicVector {
  Vec2 point;                       // v reduced into [0,1)^2
  std::array<i64, 2> lattice_index{0, 0};
  double unstable_coeff = 0.0;      // a
  double stable_coeff = 0.0;        // b
  double decay_constant = 0.0;      // C1 with d(L^k v, 0) <= C1 lambda^-|k|

  /// Small lift of L^k v.
  Vec2 offset(const ToralAutomorphism& L, int k) const {
    if (k >= 0) return L.e_s() * (stable_coeff * std::pow(L.mu_s(), k));
    return L.e_u() * (unstable_coeff * std::pow(L.mu_u(), k));
  }

  static HomoclinicVector from_coefficients(const ToralAutomorphism& L, double a, double b,
                                            std::array<i64, 2> n) {
    HomoclinicVector h;
    h.lattice_index = n;
    h.unstable_coeff = a;
    h.stable_coeff = b;
    h.decay_constant = std::max(std::abs(a), std::abs(b));
    h.point = std::abs(b) < std::abs(a) ? mod1(L.e_s() * b) : mod1(L.e_u() * a);
    return h;
  }

  static HomoclinicVector from_index(const ToralAutomorphism& L, std::array<i64, 2> n) {
    auto us = L.to_us({static_cast<double>(n[0]), static_cast<double>(n[1])});
    return from_coefficients(L, us[0], -us[1], n);
  }

  HomoclinicVector negated(const ToralAutomorphism& L) const {
    return from_coefficients(L, -unstable_coeff, -stable_coeff,
                             {-lattice_index[0], -lattice_index[1]});
  }
  HomoclinicVector plus(const ToralAutomorphism& L, const HomoclinicVector& o) const {
    return from_coefficients(L, unstable_coeff + o.unstable_coeff, stable_coeff + o.stable_coeff,
                             {lattice_index[0] + o.lattice_index[0],
                              lattice_index[1] + o.lattice_index[1]});
  }
  HomoclinicVector minus(const ToralAutomorphism& L, const HomoclinicVector& o) const {
    return plus(L, o.negated(L));
  }
};

namespace detail {

// Exact arithmetic in Q(sqrt(D)) for the decay check. A coordinate is
// (p + q sqrt(D)) / den with a denominator shared by both coordinates.
class QuadraticPoint {
public:
  QuadraticPoint(const ToralAutomorphism& L, std::array<i64, 2> n)
      : A_(L.matrix()), Ainv_(L.inverse_matrix()), D_(L.discriminant()),
        rootD_(std::sqrt(static_cast<long double>(L.discriminant()))) {
    const i128 a11 = A_.a, a12 = A_.b;
    const i128 t = A_.trace();
    const i128 D = D_;
    const i128 sigma = t > 0 ? 1 : -1;
    const i128 n1 = n[0], n2 = n[1];
    // alpha = (P + Q r) / Den solves alpha f_u - beta f_s = n with
    // f_u = (a12, (t - 2 a11 + sigma r) / 2), r = sqrt(D).
    const i128 P = sigma * n1 * D;
    const i128 Q = 2 * a12 * n2 + 2 * a11 * n1 - n1 * t;
    const i128 Den = 2 * a12 * sigma * D;
    const i128 c0 = t - 2 * a11;
    px_ = 2 * a12 * P;
    qx_ = 2 * a12 * Q;
    py_ = P * c0 + sigma * Q * D;
    qy_ = sigma * P + Q * c0;
    den_ = 2 * Den;
    if (den_ < 0) {
      den_ = -den_;
      px_ = -px_;
      qx_ = -qx_;
      py_ = -py_;
      qy_ = -qy_;
    }
    reduce();
  }

  void forward() { apply(A_); }
  void backward() { apply(Ainv_); }

  /// Exact centered representative converted to double.
  Vec2 centered_value() const {
    return {static_cast<double>(centered_coord(px_, qx_)),
            static_cast<double>(centered_coord(py_, qy_))};
  }

private:
  int sign(i128 X, i128 Y) const {
    if (X >= 0 && Y >= 0) return (X == 0 && Y == 0) ? 0 : 1;
    if (X <= 0 && Y <= 0) return -1;
    check(X);
    check(Y);
    const i128 lhs = X * X, rhs = Y * Y * D_;
    if (lhs == rhs) return 0;
    return lhs > rhs ? (X > 0 ? 1 : -1) : (Y > 0 ? 1 : -1);
  }

  static void check(i128 v) {
    const i128 limit = static_cast<i128>(1) << 62;
    if (v > limit || v < -limit) throw std::overflow_error("QuadraticPoint: magnitude overflow");
  }

  // floor((p + q r) / den)
  i128 floor_of(i128 p, i128 q, i128 den) const {
    long double approx = (static_cast<long double>(p) + static_cast<long double>(q) * rootD_) /
                         static_cast<long double>(den);
    i128 k = static_cast<i128>(std::floor(approx));
    while (sign(p - k * den, q) < 0) --k;
    while (sign(p - (k + 1) * den, q) >= 0) ++k;
    return k;
  }

  void reduce() {
    px_ -= floor_of(px_, qx_, den_) * den_;
    py_ -= floor_of(py_, qy_, den_) * den_;
  }

  void apply(const IntMatrix2& M) {
    const i128 npx = M.a * px_ + M.b * py_, nqx = M.a * qx_ + M.b * qy_;
    const i128 npy = M.c * px_ + M.d * py_, nqy = M.c * qx_ + M.d * qy_;
    px_ = npx;
    qx_ = nqx;
    py_ = npy;
    qy_ = nqy;
    reduce();
  }

  long double centered_coord(i128 p, i128 q) const {
    // shift into [-1/2, 1/2): subtract floor(v + 1/2)
    const i128 k = floor_of(2 * p + den_, 2 * q, 2 * den_);
    const i128 X = p - k * den_;
    const i128 Y = q;
    const long double den = static_cast<long double>(den_);
    if ((X >= 0) == (Y >= 0) || X == 0 || Y == 0)
      return (static_cast<long double>(X) + static_cast<long double>(Y) * rootD_) / den;
    // opposite signs: multiply by the conjugate to avoid cancellation
    check(X);
    check(Y);
    const i128 num = X * X - Y * Y * D_;
    const long double conj = static_cast<long double>(X) - static_cast<long double>(Y) * rootD_;
    return static_cast<long double>(num) / (den * conj);
  }

  IntMatrix2 A_, Ainv_;
  i128 D_;
  long double rootD_;
  i128 px_ = 0, qx_ = 0, py_ = 0, qy_ = 0, den_ = 1;
};

}  // namespace detail

/// Exact check of d(L^k v, 0) <= C1 lambda^-|k| for |k| <= k_max. Returns the
/// largest observed ratio d(L^k v,0) / (C1 lambda^-|k|).
inline double homoclinic_decay_ratio(const ToralAutomorphism& L, const HomoclinicVector& h,
                                     int k_max = 30) {
  if (h.decay_constant == 0.0) return 0.0;
  double worst = 0.0;
  auto record = [&](const detail::QuadraticPoint& q, int k) {
    const double d = q.centered_value().norm();
    const double bound = h.decay_constant * std::pow(L.lambda(), -std::abs(k));
    worst = std::max(worst, d / bound);
  };
  detail::QuadraticPoint fwd(L, h.lattice_index);
  record(fwd, 0);
  detail::QuadraticPoint bwd = fwd;
  for (int k = 1; k <= k_max; ++k) {
    fwd.forward();
    record(fwd, k);
    bwd.backward();
    record(bwd, -k);
  }
  return worst;
}

/// Homoclinic points for every lattice index with |n|_inf <= bound.
inline std::vector<HomoclinicVector> homoclinic_points(const ToralAutomorphism& L, i64 bound) {
  if (bound < 1) throw std::invalid_argument("homoclinic_points: bound must be >= 1");
  std::vector<HomoclinicVector> out;
  for (i64 n1 = -bound; n1 <= bound; ++n1)
    for (i64 n2 = -bound; n2 <= bound; ++n2) {
      auto h = HomoclinicVector::from_index(L, {n1, n2});
      if (homoclinic_decay_ratio(L, h) > 1.0 + 1e-9)
        throw std::logic_error("homoclinic decay check failed");
      out.push_back(h);
    }
  return out;
}

/// Split a homoclinic w into u (stable lift) + v (unstable lift), both homoclinic.
inline std::pair<HomoclinicVector, HomoclinicVector> bracket_decompose(
    const HomoclinicVector& w, const ToralAutomorphism& L) {
  const Vec2 W = centered(w.point);
  const Vec2 unstable_lift = L.e_u() * w.unstable_coeff;
  const Vec2 mv = W - unstable_lift;
  const std::array<i64, 2> m{static_cast<i64>(std::llround(mv.x)),
                             static_cast<i64>(std::llround(mv.y))};
  const auto us = L.to_us(W);
  const double r = us[0], s = us[1];
  auto u = HomoclinicVector::from_coefficients(L, w.unstable_coeff - r, s, {-m[0], -m[1]});
  auto v = HomoclinicVector::from_coefficients(
      L, r, w.stable_coeff - s, {w.lattice_index[0] + m[0], w.lattice_index[1] + m[1]});
  u.point = mod1(L.e_s() * s);
  v.point = mod1(L.e_u() * r);
  return {u, v};
}

}  // namespace anosov
