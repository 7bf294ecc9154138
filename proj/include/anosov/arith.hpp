#pragma once

// Small value types shared by every module: exact rationals mod 1, double
// 2-vectors, 2x2 integer matrices and a couple of summation helpers.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace anosov {

using i64 = std::int64_t;
using i128 = __int128;

/// Floor division for signed integers (rounds toward -inf).
template <typename I>
constexpr I floor_div(I a, I b) {
  I q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

template <typename I>
constexpr I floor_mod(I a, I b) {
  return a - floor_div(a, b) * b;
}

// ---------------------------------------------------------------------------
// Vec2

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  friend constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
  constexpr bool operator==(const Vec2&) const = default;

  double norm() const { return std::hypot(x, y); }
};

inline double wrap01(double v) {
  double r = v - std::floor(v);
  // floor can leave r == 1.0 for tiny negative inputs
  return r >= 1.0 ? 0.0 : r;
}

/// Reduce both coordinates into [0,1).
inline Vec2 mod1(Vec2 v) { return {wrap01(v.x), wrap01(v.y)}; }

/// Representative of v mod Z^2 in [-1/2, 1/2)^2.
inline Vec2 centered(Vec2 v) {
  return {v.x - std::floor(v.x + 0.5), v.y - std::floor(v.y + 0.5)};
}

/// Quotient Euclidean distance on T^2 (minimum over lattice translates).
inline double torus_distance(Vec2 p, Vec2 q) { return centered(p - q).norm(); }

// ---------------------------------------------------------------------------
// Rational numbers reduced mod 1

class Rational {
public:
  constexpr Rational() = default;
  Rational(i64 num, i64 den) { assign(num, den); }

  i64 num() const { return num_; }
  i64 den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// k * r mod 1, exactly.
  Rational times(i64 k) const {
    i128 n = static_cast<i128>(num_) * k;
    return from_wide(n, den_);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    i128 n = static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_;
    i128 d = static_cast<i128>(a.den_) * b.den_;
    return from_wide(n, d);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    i128 n = static_cast<i128>(a.num_) * b.den_ - static_cast<i128>(b.num_) * a.den_;
    i128 d = static_cast<i128>(a.den_) * b.den_;
    return from_wide(n, d);
  }
  bool operator==(const Rational&) const = default;
  auto operator<=>(const Rational& o) const {
    return static_cast<i128>(num_) * o.den_ <=> static_cast<i128>(o.num_) * den_;
  }

  std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

  /// Parse "p/q" or an integer string.
  static Rational parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(std::stoll(s), 1);
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  }

private:
  static i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      i128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static Rational from_wide(i128 n, i128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    n = n % d;
    if (n < 0) n += d;
    i128 g = gcd128(n, d);
    if (g == 0) g = 1;
    n /= g;
    d /= g;
    if (d > std::numeric_limits<i64>::max())
      throw std::overflow_error("Rational: denominator overflow");
    Rational r;
    r.num_ = static_cast<i64>(n);
    r.den_ = static_cast<i64>(d);
    return r;
  }

  void assign(i64 num, i64 den) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    *this = from_wide(num, den);
  }

  i64 num_ = 0;
  i64 den_ = 1;
};

struct RationalPoint {
  Rational x;
  Rational y;

  Vec2 to_vec() const { return {x.to_double(), y.to_double()}; }
  bool operator==(const RationalPoint&) const = default;
  auto operator<=>(const RationalPoint&) const = default;

  friend RationalPoint operator+(const RationalPoint& a, const RationalPoint& b) {
    return {a.x + b.x, a.y + b.y};
  }
};

// ---------------------------------------------------------------------------
// 2x2 integer matrices

struct IntMatrix2 {
  i64 a = 1, b = 0, c = 0, d = 1;

  static constexpr IntMatrix2 identity() { return {1, 0, 0, 1}; }

  constexpr i64 det() const { return a * d - b * c; }
  constexpr i64 trace() const { return a + d; }

  IntMatrix2 operator*(const IntMatrix2& o) const {
    auto mul = [](i64 p, i64 q) {
      i128 r = static_cast<i128>(p) * q;
      if (r > std::numeric_limits<i64>::max() || r < std::numeric_limits<i64>::min())
        throw std::overflow_error("IntMatrix2: entry overflow");
      return static_cast<i64>(r);
    };
    return {mul(a, o.a) + mul(b, o.c), mul(a, o.b) + mul(b, o.d),
            mul(c, o.a) + mul(d, o.c), mul(c, o.b) + mul(d, o.d)};
  }
  constexpr IntMatrix2 operator-(const IntMatrix2& o) const {
    return {a - o.a, b - o.b, c - o.c, d - o.d};
  }
  constexpr bool operator==(const IntMatrix2&) const = default;

  IntMatrix2 pow(int n) const {
    IntMatrix2 result = identity();
    IntMatrix2 base = *this;
    while (n > 0) {
      if (n & 1) result = result * base;
      n >>= 1;
      if (n > 0) base = base * base;
    }
    return result;
  }

  std::array<i64, 2> apply(std::array<i64, 2> v) const {
    return {a * v[0] + b * v[1], c * v[0] + d * v[1]};
  }
  Vec2 apply(Vec2 v) const {
    return {static_cast<double>(a) * v.x + static_cast<double>(b) * v.y,
            static_cast<double>(c) * v.x + static_cast<double>(d) * v.y};
  }
  RationalPoint apply(const RationalPoint& p) const {
    return {p.x.times(a) + p.y.times(b), p.x.times(c) + p.y.times(d)};
  }
};

// ---------------------------------------------------------------------------
// Summation

/// Neumaier compensated accumulator.
class CompensatedSum {
public:
  void add(double v) {
    double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> values) {
  CompensatedSum s;
  for (double v : values) s.add(v);
  return s.value();
}

/// log(sum(exp(v_i))), stable for large magnitudes.
inline double log_sum_exp(std::span<const double> values) {
  if (values.empty()) return -std::numeric_limits<double>::infinity();
  double m = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(m)) return m;
  CompensatedSum s;
  for (double v : values) s.add(std::exp(v - m));
  return m + std::log(s.value());
}

}  // namespace anosov
