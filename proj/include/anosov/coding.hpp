#pragma once

// Markov partitions for hyperbolic toral automorphisms and the induced
// subshift of finite type.
//
// Every rectangle is stored in (u, s) eigen-coordinates as a representative in
// the plane; its class mod Z^2 is the partition element. L acts on (u, s) as
// (mu_u u, mu_s s), so images and intersections of rectangles stay
// axis-aligned.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"
#include "torus.hpp"

namespace anosov {

inline constexpr double kGeomTol = 1e-9;

struct Rect {
  double u0 = 0, u1 = 0;  // unstable range
  double s0 = 0, s1 = 0;  // stable range

  double wu() const { return u1 - u0; }
  double ws() const { return s1 - s0; }
  double area_us() const { return wu() * ws(); }
  double center_u() const { return 0.5 * (u0 + u1); }
  double center_s() const { return 0.5 * (s0 + s1); }

  Rect shifted(double du, double ds) const { return {u0 + du, u1 + du, s0 + ds, s1 + ds}; }
  Rect scaled(double fu, double fs) const {
    Rect r{u0 * fu, u1 * fu, s0 * fs, s1 * fs};
    if (r.u0 > r.u1) std::swap(r.u0, r.u1);
    if (r.s0 > r.s1) std::swap(r.s0, r.s1);
    return r;
  }
  Rect intersect(const Rect& o) const {
    return {std::max(u0, o.u0), std::min(u1, o.u1), std::max(s0, o.s0), std::min(s1, o.s1)};
  }
  bool contains(double u, double s, double tol = kGeomTol) const {
    return u >= u0 - tol && u <= u1 + tol && s >= s0 - tol && s <= s1 + tol;
  }
  bool positive(double tol = kGeomTol) const { return wu() > tol && ws() > tol; }
};

/// Interval helpers on one coordinate.
inline std::pair<double, double> scaled_interval(double lo, double hi, double f) {
  double a = lo * f, b = hi * f;
  return a <= b ? std::pair{a, b} : std::pair{b, a};
}

struct Word {
  std::vector<int> symbols;
  int offset = 0;  // index in symbols of position 0

  int first() const { return -offset; }
  int last() const { return static_cast<int>(symbols.size()) - offset - 1; }
  int at(int pos) const { return symbols[static_cast<std::size_t>(pos + offset)]; }
  std::size_t size() const { return symbols.size(); }
  bool operator==(const Word&) const = default;
  auto operator<=>(const Word&) const = default;

  /// Sub-word on positions [from, to], keeping the position labels.
  Word slice(int from, int to) const {
    Word w;
    w.symbols.assign(symbols.begin() + (from + offset), symbols.begin() + (to + offset + 1));
    w.offset = -from;
    return w;
  }
};

struct Sft {
  int alphabet_size = 0;
  std::vector<std::vector<std::uint8_t>> transition;
  int mixing_power = 0;

  bool allowed(int a, int b) const { return transition[a][b] != 0; }
};

/// Smallest n with every entry of T^n positive, or 0 if none up to limit.
inline int mixing_power(const std::vector<std::vector<std::uint8_t>>& T, int limit = 50) {
  const std::size_t n = T.size();
  std::vector<std::vector<std::uint8_t>> P = T;
  for (int k = 1; k <= limit; ++k) {
    bool all = true;
    for (auto& row : P)
      for (auto v : row) all = all && v;
    if (all) return k;
    std::vector<std::vector<std::uint8_t>> Q(n, std::vector<std::uint8_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (P[i][j])
          for (std::size_t l = 0; l < n; ++l)
            if (T[j][l]) Q[i][l] = 1;
    P = std::move(Q);
  }
  return 0;
}

struct Cylinder {
  Rect rect;     // plane representative, inside the position-0 rectangle
  Vec2 center;   // torus point
  double diameter = 0;
};

struct CodingOptions {
  int basis_rank = 0;   // which admissible lattice basis to use (sorted by diameter)
  int extra_levels = 0; // refine this many levels past the first valid one
  int max_levels = 8;
};

struct BaseBasis {
  std::array<i64, 2> w1, w2;  // integer lattice vectors
  double p, s1, r, q;         // (u, s) coordinates: w1 = (p, s1), w2 = (-r, q)
  double diameter;
};

class MarkovCoding {
public:
  MarkovCoding() = default;

  const ToralAutomorphism& map() const { return L_; }
  const std::vector<Rect>& rectangles() const { return rects_; }
  const Sft& sft() const { return sft_; }
  int alphabet_size() const { return sft_.alphabet_size; }
  int zero_symbol() const { return 0; }
  int refinement_level() const { return level_; }
  bool symmetrized() const { return symmetrized_; }
  const BaseBasis& base_basis() const { return basis_; }
  std::array<i64, 2> transition_translate(int a, int b) const { return translate_[a][b]; }

  double diameter(int a) const { return rect_diameter(L_, rects_[a]); }
  double max_diameter() const {
    double d = 0;
    for (int a = 0; a < alphabet_size(); ++a) d = std::max(d, diameter(a));
    return d;
  }
  /// Torus area of rectangle a.
  double area(int a) const { return rects_[a].area_us() * L_.basis_area(); }

  static double rect_diameter(const ToralAutomorphism& L, const Rect& r) {
    Vec2 d1 = L.from_us(r.wu(), r.ws()), d2 = L.from_us(r.wu(), -r.ws());
    return std::max(d1.norm(), d2.norm());
  }

  std::array<double, 2> lattice_us(std::array<i64, 2> m) const {
    return L_.to_us({static_cast<double>(m[0]), static_cast<double>(m[1])});
  }

  /// trace(T^n), exact.
  i64 trace_power(int n) const {
    const std::size_t k = static_cast<std::size_t>(alphabet_size());
    std::vector<std::vector<i64>> P(k, std::vector<i64>(k, 0));
    for (std::size_t i = 0; i < k; ++i) P[i][i] = 1;
    for (int step = 0; step < n; ++step) {
      std::vector<std::vector<i64>> Q(k, std::vector<i64>(k, 0));
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
          if (P[i][j])
            for (std::size_t l = 0; l < k; ++l)
              if (sft_.transition[j][l]) Q[i][l] += P[i][j];
      P = std::move(Q);
    }
    i64 t = 0;
    for (std::size_t i = 0; i < k; ++i) t += P[i][i];
    return t;
  }

  /// Every (symbol, local (u,s)) with x in the rectangle, up to tolerance.
  std::vector<std::pair<int, std::array<double, 2>>> locate(Vec2 x, double tol = kGeomTol) const {
    std::vector<std::pair<int, std::array<double, 2>>> out;
    const auto X = L_.to_us(mod1(x));
    for (int a = 0; a < alphabet_size(); ++a) {
      const Rect& R = rects_[a];
      auto box = xy_box(R);
      for (i64 m0 = static_cast<i64>(std::floor(box[0] - 1 - tol)); m0 <= static_cast<i64>(std::ceil(box[1] + tol)); ++m0)
        for (i64 m1 = static_cast<i64>(std::floor(box[2] - 1 - tol)); m1 <= static_cast<i64>(std::ceil(box[3] + tol)); ++m1) {
          auto t = lattice_us({m0, m1});
          double u = X[0] + t[0], s = X[1] + t[1];
          if (R.contains(u, s, tol)) out.push_back({a, {u, s}});
        }
    }
    return out;
  }

  /// All itineraries a_{-m..m} of x, up to the geometric tolerance.
  std::vector<Word> encode(Vec2 x, int depth) const {
    if (depth < 1) throw std::invalid_argument("encode: depth must be >= 1");
    std::vector<Word> out;
    for (auto& [a0, local] : locate(x)) {
      std::vector<std::vector<int>> futures, pasts;
      std::vector<int> path{a0};
      extend_forward(local[0], a0, 0.0, 1, depth, path, futures);
      path = {a0};
      extend_backward(local[1], a0, 0.0, 1, depth, path, pasts);
      for (auto& p : pasts)
        for (auto& f : futures) {
          Word w;
          w.symbols.assign(p.rbegin(), p.rend());
          w.symbols.insert(w.symbols.end(), f.begin() + 1, f.end());
          w.offset = depth;
          out.push_back(std::move(w));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  /// The cylinder {x : L^j x in rect_{a_j}} in the frame of position 0.
  Cylinder decode(const Word& w) const {
    if (w.size() == 0) throw std::invalid_argument("decode: empty word");
    const int a0 = w.at(0);
    Rect cyl = rects_[a0];
    double V = 0.0, fu = 1.0;
    for (int j = 1; j <= w.last(); ++j) {
      const int a = w.at(j - 1), b = w.at(j);
      if (!sft_.allowed(a, b)) throw EmptyCylinder("inadmissible transition in word");
      fu /= L_.mu_u();
      V += fu * lattice_us(translate_[a][b])[0];
      auto [lo, hi] = scaled_interval(rects_[b].u0, rects_[b].u1, fu);
      cyl.u0 = std::max(cyl.u0, lo + V);
      cyl.u1 = std::min(cyl.u1, hi + V);
    }
    double W = 0.0, fs = 1.0;
    for (int j = 1; j <= -w.first(); ++j) {
      const int b = w.at(-j + 1), a = w.at(-j);
      if (!sft_.allowed(a, b)) throw EmptyCylinder("inadmissible transition in word");
      W -= fs * lattice_us(translate_[a][b])[1];
      fs *= L_.mu_s();
      auto [lo, hi] = scaled_interval(rects_[a].s0, rects_[a].s1, fs);
      cyl.s0 = std::max(cyl.s0, lo + W);
      cyl.s1 = std::min(cyl.s1, hi + W);
    }
    if (cyl.wu() <= 0 || cyl.ws() <= 0) throw EmptyCylinder("cylinder has empty interior");
    Cylinder c;
    c.rect = cyl;
    c.center = mod1(L_.from_us(cyl.center_u(), cyl.center_s()));
    c.diameter = rect_diameter(L_, cyl);
    return c;
  }

  /// All admissible words of length len (offset 0), lexicographic.
  std::vector<Word> admissible_words(int len) const {
    std::vector<Word> out;
    std::vector<int> path;
    std::function<void()> rec = [&]() {
      if (static_cast<int>(path.size()) == len) {
        out.push_back({path, 0});
        return;
      }
      for (int b = 0; b < alphabet_size(); ++b)
        if (path.empty() || sft_.allowed(path.back(), b)) {
          path.push_back(b);
          rec();
          path.pop_back();
        }
    };
    rec();
    return out;
  }

  /// Cyclically admissible words of length n; count = trace(T^n).
  std::vector<Word> periodic_words(int n) const {
    if (n < 1) throw std::invalid_argument("periodic_words: n must be >= 1");
    std::vector<Word> out;
    for (auto& w : admissible_words(n))
      if (sft_.allowed(w.symbols.back(), w.symbols.front())) out.push_back(std::move(w));
    return out;
  }

  /// Exact point of Fix(L^n) coded by the periodic word (a_0 .. a_{n-1})^infinity.
  RationalPoint periodic_point(const Word& w) const {
    const int n = static_cast<int>(w.size());
    const IntMatrix2& A = L_.matrix();
    std::array<i64, 2> T{0, 0};
    for (int j = 0; j < n; ++j) {
      const int a = w.symbols[j], b = w.symbols[(j + 1) % n];
      if (!sft_.allowed(a, b)) throw EmptyCylinder("word is not cyclically admissible");
      auto t = translate_[a][b];
      auto AT = A.apply(T);
      T = {AT[0] + t[0], AT[1] + t[1]};
    }
    // the lift X in rect_{a_0} satisfies A^n X = X + T
    const IntMatrix2 M = A.pow(n) - IntMatrix2::identity();
    const i64 det = M.det();
    if (det == 0) throw DegeneratePeriod("det(A^n - I) = 0");
    const i128 x = static_cast<i128>(M.d) * T[0] - static_cast<i128>(M.b) * T[1];
    const i128 y = -static_cast<i128>(M.c) * T[0] + static_cast<i128>(M.a) * T[1];
    auto reduce = [det](i128 v) {
      i128 d = det < 0 ? -det : det;
      if (det < 0) v = -v;
      v %= d;
      if (v < 0) v += d;
      return Rational(static_cast<i64>(v), static_cast<i64>(d));
    };
    return {reduce(x), reduce(y)};
  }

  // -------------------------------------------------------------------------

  static std::vector<BaseBasis> candidate_bases(const ToralAutomorphism& L, int bound = 8) {
    std::vector<std::pair<std::array<i64, 2>, std::array<double, 2>>> q1, q2;
    for (i64 i = -bound; i <= bound; ++i)
      for (i64 j = -bound; j <= bound; ++j) {
        auto us = L.to_us({static_cast<double>(i), static_cast<double>(j)});
        if (us[0] > 1e-12 && us[1] > 1e-12) q1.push_back({{i, j}, us});
        if (us[0] < -1e-12 && us[1] > 1e-12) q2.push_back({{i, j}, us});
      }
    const double ms = std::abs(L.mu_s());
    std::vector<BaseBasis> out;
    for (auto& [n1, us1] : q1)
      for (auto& [n2, us2] : q2) {
        if (std::abs(n1[0] * n2[1] - n1[1] * n2[0]) != 1) continue;
        BaseBasis b{n1, n2, us1[0], us1[1], -us2[0], us2[1], 0.0};
        if (L.mu_s() < 0 && (ms * b.q > b.s1 + 1e-12 || ms * b.s1 > b.q + 1e-12)) continue;
        b.diameter = std::max(rect_diameter(L, {0, b.p, 0, b.q}), rect_diameter(L, {0, b.r, 0, b.s1}));
        out.push_back(b);
      }
    std::sort(out.begin(), out.end(), [](const BaseBasis& x, const BaseBasis& y) {
      if (x.diameter != y.diameter) return x.diameter < y.diameter;
      return std::tie(x.w1, x.w2) < std::tie(y.w1, y.w2);
    });
    return out;
  }

  static MarkovCoding build(const ToralAutomorphism& L, const CodingOptions& opt = {}) {
    auto bases = candidate_bases(L);
    MarkovCoding mc;
    mc.L_ = L;
    std::vector<Rect> base;
    if (!bases.empty() && static_cast<std::size_t>(opt.basis_rank) < bases.size()) {
      mc.basis_ = bases[static_cast<std::size_t>(opt.basis_rank)];
      const auto& b = mc.basis_;
      base = {Rect{0, b.p, 0, b.q}, Rect{b.p, b.p + b.r, 0, b.s1}};
    } else if (bases.empty()) {
      throw ConstructionFailed("no admissible lattice basis for the base partition");
    } else {
      throw ConstructionFailed("basis_rank out of range");
    }
    // negative unstable eigenvalue: use the symmetric partition P v (-P)
    if (L.mu_u() < 0) {
      std::vector<Rect> neg;
      for (auto& r : base) neg.push_back(r.scaled(-1, -1));
      base = mc.refine(base, neg);
      mc.symmetrized_ = true;
    }
    mc.check_area(base, "base partition");

    int valid_level = -1;
    for (int k = 0; k <= opt.max_levels; ++k) {
      std::vector<Rect> part = base;
      for (int j = 1; j <= k; ++j) {
        part = mc.refine(part, mc.image(base, j));
        part = mc.refine(part, mc.image(base, -j));
      }
      mc.check_area(part, "refinement");
      mc.rects_ = part;
      mc.sft_.alphabet_size = static_cast<int>(part.size());
      bool ok = mc.max_diameter() < 0.5 && mc.extract_transitions();
      if (ok && valid_level < 0) valid_level = k;
      if (valid_level >= 0 && k == valid_level + opt.extra_levels) {
        mc.level_ = k;
        mc.finalize();
        return mc;
      }
    }
    throw ConstructionFailed("no valid refinement within " + std::to_string(opt.max_levels) + " levels");
  }

private:
  // bounding box of a rectangle in xy coordinates: {xmin, xmax, ymin, ymax}
  std::array<double, 4> xy_box(const Rect& r) const {
    std::array<double, 4> box{std::numeric_limits<double>::max(), -std::numeric_limits<double>::max(),
                              std::numeric_limits<double>::max(), -std::numeric_limits<double>::max()};
    for (double u : {r.u0, r.u1})
      for (double s : {r.s0, r.s1}) {
        Vec2 p = L_.from_us(u, s);
        box[0] = std::min(box[0], p.x);
        box[1] = std::max(box[1], p.x);
        box[2] = std::min(box[2], p.y);
        box[3] = std::max(box[3], p.y);
      }
    return box;
  }

  // integer translates m with (b + m) meeting a, as candidates
  template <typename F>
  void for_each_translate(const Rect& a, const Rect& b, F&& f) const {
    auto A = xy_box(a), B = xy_box(b);
    const i64 x0 = static_cast<i64>(std::floor(A[0] - B[1])) - 1, x1 = static_cast<i64>(std::ceil(A[1] - B[0])) + 1;
    const i64 y0 = static_cast<i64>(std::floor(A[2] - B[3])) - 1, y1 = static_cast<i64>(std::ceil(A[3] - B[2])) + 1;
    for (i64 m0 = x0; m0 <= x1; ++m0)
      for (i64 m1 = y0; m1 <= y1; ++m1) {
        auto t = lattice_us({m0, m1});
        Rect piece = a.intersect(b.shifted(t[0], t[1]));
        if (piece.positive()) f(std::array<i64, 2>{m0, m1}, piece);
      }
  }

  std::vector<Rect> refine(const std::vector<Rect>& P, const std::vector<Rect>& Q) const {
    std::vector<Rect> out;
    for (const auto& a : P)
      for (const auto& b : Q) for_each_translate(a, b, [&](auto, const Rect& piece) { out.push_back(piece); });
    return out;
  }

  std::vector<Rect> image(const std::vector<Rect>& P, int j) const {
    const double fu = std::pow(L_.mu_u(), j), fs = std::pow(L_.mu_s(), j);
    std::vector<Rect> out;
    for (auto& r : P) out.push_back(r.scaled(fu, fs));
    return out;
  }

  void check_area(const std::vector<Rect>& P, const char* what) const {
    double total = 0;
    for (auto& r : P) total += r.area_us() * L_.basis_area();
    if (std::abs(total - 1.0) > kGeomTol)
      throw ConstructionFailed(std::string(what) + ": total area " + std::to_string(total) + " != 1");
  }

  // Fills transition counts; false if some crossing is not single.
  bool extract_transitions() {
    const int n = static_cast<int>(rects_.size());
    sft_.alphabet_size = n;
    sft_.transition.assign(n, std::vector<std::uint8_t>(n, 0));
    translate_.assign(n, std::vector<std::array<i64, 2>>(n, {0, 0}));
    auto img = image(rects_, 1);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        int count = 0;
        // (R_b + m) meets L(R_a)  <=>  R_b meets L(R_a) - m
        for_each_translate(img[a], rects_[b], [&](std::array<i64, 2> m, const Rect& piece) {
          ++count;
          translate_[a][b] = m;
          const Rect& B = rects_[b];
          auto t = lattice_us(m);
          // full unstable extent of R_b + m, full stable extent of L(R_a)
          if (std::abs(piece.u0 - (B.u0 + t[0])) > kGeomTol || std::abs(piece.u1 - (B.u1 + t[0])) > kGeomTol ||
              std::abs(piece.s0 - img[a].s0) > kGeomTol || std::abs(piece.s1 - img[a].s1) > kGeomTol)
            count = 1000;
        });
        if (count > 1) return false;
        sft_.transition[a][b] = static_cast<std::uint8_t>(count);
      }
    return true;
  }

  void finalize() {
    const int n = static_cast<int>(rects_.size());
    // the zero symbol: a fixed rectangle of largest area
    int zero = -1;
    for (int a = 0; a < n; ++a)
      if (sft_.transition[a][a] && (zero < 0 || area(a) > area(zero) + 1e-12)) zero = a;
    if (zero < 0) throw ConstructionFailed("no symbol with a self-transition");
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
      if ((x == zero) != (y == zero)) return x == zero;
      const Rect &a = rects_[x], &b = rects_[y];
      return std::tie(a.u0, a.s0) < std::tie(b.u0, b.s0);
    });
    std::vector<Rect> r2(n);
    for (int i = 0; i < n; ++i) r2[i] = rects_[order[i]];
    rects_ = std::move(r2);
    if (!extract_transitions()) throw ConstructionFailed("transition extraction failed after reordering");
    sft_.mixing_power = mixing_power(sft_.transition);
    if (sft_.mixing_power == 0) throw ConstructionFailed("transition matrix not mixing within 50 steps");
  }

  void extend_forward(double u, int a, double V, int j, int depth, std::vector<int>& path,
                      std::vector<std::vector<int>>& out) const {
    if (j > depth) {
      out.push_back(path);
      return;
    }
    const double fu = std::pow(L_.mu_u(), -j);
    for (int b = 0; b < alphabet_size(); ++b) {
      if (!sft_.allowed(a, b)) continue;
      const double Vb = V + fu * lattice_us(translate_[a][b])[0];
      // L^j x in the frame of rect_b
      const double uj = (u - Vb) / fu;
      if (uj < rects_[b].u0 - kGeomTol || uj > rects_[b].u1 + kGeomTol) continue;
      path.push_back(b);
      extend_forward(u, b, Vb, j + 1, depth, path, out);
      path.pop_back();
    }
  }

  void extend_backward(double s, int b, double W, int j, int depth, std::vector<int>& path,
                       std::vector<std::vector<int>>& out) const {
    if (j > depth) {
      out.push_back(path);
      return;
    }
    const double prev = std::pow(L_.mu_s(), j - 1), fs = prev * L_.mu_s();
    for (int a = 0; a < alphabet_size(); ++a) {
      if (!sft_.allowed(a, b)) continue;
      const double Wa = W - prev * lattice_us(translate_[a][b])[1];
      const double sj = (s - Wa) / fs;
      if (sj < rects_[a].s0 - kGeomTol || sj > rects_[a].s1 + kGeomTol) continue;
      path.push_back(a);
      extend_backward(s, a, Wa, j + 1, depth, path, out);
      path.pop_back();
    }
  }

  ToralAutomorphism L_;
  std::vector<Rect> rects_;
  Sft sft_;
  std::vector<std::vector<std::array<i64, 2>>> translate_;
  BaseBasis basis_{};
  int level_ = 0;
  bool symmetrized_ = false;
};

inline MarkovCoding build_partition(const ToralAutomorphism& L, const CodingOptions& opt = {}) {
  return MarkovCoding::build(L, opt);
}

}  // namespace anosov
