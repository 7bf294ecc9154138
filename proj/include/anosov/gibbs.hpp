#pragma once

// Equilibrium states on the symbolic side, discretized on depth-m cylinders:
// the weighted transfer matrix on admissible m-words, its leading eigendata,
// cylinder weights, the g-function, the product density and Bowen constants.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "arith.hpp"
#include "coding.hpp"
#include "errors.hpp"
#include "potential.hpp"

namespace anosov {

/// Admissible words of length m with the shift edges aw -> wb.
class WordSpace {
public:
  WordSpace(const Sft& sft, int depth) : sft_(sft), depth_(depth), half_(depth / 2) {
    if (depth < 1) throw std::invalid_argument("WordSpace: depth must be >= 1");
    if (sft.mixing_power == 0) throw NotMixing("transition matrix is not mixing");
    std::vector<int> path;
    std::function<void()> rec = [&]() {
      if (static_cast<int>(path.size()) == depth) {
        states_.push_back(path);
        return;
      }
      for (int b = 0; b < sft.alphabet_size; ++b)
        if (path.empty() || sft.allowed(path.back(), b)) {
          path.push_back(b);
          rec();
          path.pop_back();
        }
    };
    rec();
    const std::size_t n = states_.size();
    succ_.assign(n, {});
    pred_.assign(n, {});
    std::vector<int> next(static_cast<std::size_t>(depth));
    for (std::size_t i = 0; i < n; ++i) {
      const auto& s = states_[i];
      std::copy(s.begin() + 1, s.end(), next.begin());
      for (int b = 0; b < sft.alphabet_size; ++b) {
        if (!sft.allowed(s.back(), b)) continue;
        next.back() = b;
        const auto j = index_of(next);
        succ_[i].push_back(static_cast<int>(j));
        pred_[j].push_back(static_cast<int>(i));
      }
    }
  }

  int depth() const { return depth_; }
  /// Position of the first symbol of a state word (states cover positions -half..m-1-half).
  int half() const { return half_; }
  std::size_t size() const { return states_.size(); }
  const Sft& sft() const { return sft_; }
  const std::vector<int>& state(std::size_t i) const { return states_[i]; }
  const std::vector<int>& successors(std::size_t i) const { return succ_[i]; }
  const std::vector<int>& predecessors(std::size_t i) const { return pred_[i]; }
  Word state_word(std::size_t i) const { return {states_[i], half_}; }

  std::size_t index_of(const std::vector<int>& w) const {
    auto it = std::lower_bound(states_.begin(), states_.end(), w);
    if (it == states_.end() || *it != w) throw std::out_of_range("WordSpace: word not admissible");
    return static_cast<std::size_t>(it - states_.begin());
  }

  /// Half-open index range of states whose prefix is p.
  std::pair<std::size_t, std::size_t> prefix_range(const std::vector<int>& p) const {
    auto lo = std::lower_bound(states_.begin(), states_.end(), p);
    auto hi = std::partition_point(lo, states_.end(), [&](const std::vector<int>& s) {
      return std::equal(p.begin(), p.end(), s.begin());
    });
    return {static_cast<std::size_t>(lo - states_.begin()), static_cast<std::size_t>(hi - states_.begin())};
  }

private:
  Sft sft_;
  int depth_;
  int half_;
  std::vector<std::vector<int>> states_;
  std::vector<std::vector<int>> succ_, pred_;
};

/// phi at the decoded center of every state cylinder.
inline std::vector<double> cylinder_values(const WordSpace& space, const MarkovCoding& coding,
                                           const Potential& phi) {
  std::vector<double> out(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) out[i] = phi(coding.decode(space.state_word(i)).center);
  return out;
}

struct PowerOptions {
  double tol = 1e-12;
  int max_iter = 100000;
};

namespace detail {

// Leading eigenvalue and positive eigenvector of M[s][s'] = e^{psi(s)} [s -> s'].
// right: r_s = e^{psi_s} sum_{s'} r_{s'}; left: l_{s'} = sum_s l_s e^{psi_s}.
inline std::pair<double, std::vector<double>> power_iteration(const WordSpace& space,
                                                              const std::vector<double>& weight,
                                                              bool left, const PowerOptions& opt) {
  const std::size_t n = space.size();
  std::vector<double> v(n, 1.0 / static_cast<double>(n)), w(n);
  double rho = 0.0;
  for (int it = 0; it < opt.max_iter; ++it) {
    if (left) {
      std::fill(w.begin(), w.end(), 0.0);
      for (std::size_t s = 0; s < n; ++s) {
        const double x = v[s] * weight[s];
        for (int t : space.successors(s)) w[static_cast<std::size_t>(t)] += x;
      }
    } else {
      for (std::size_t s = 0; s < n; ++s) {
        double acc = 0.0;
        for (int t : space.successors(s)) acc += v[static_cast<std::size_t>(t)];
        w[s] = weight[s] * acc;
      }
    }
    CompensatedSum total;
    for (double x : w) total.add(x);
    const double new_rho = total.value();
    double diff = 0.0, vmax = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      w[s] /= new_rho;
      diff = std::max(diff, std::abs(w[s] - v[s]));
      vmax = std::max(vmax, w[s]);
    }
    v.swap(w);
    const bool settled = std::abs(new_rho - rho) <= opt.tol * new_rho && diff <= opt.tol * vmax;
    rho = new_rho;
    if (settled && it > 2) return {rho, v};
  }
  throw NoConvergence("power iteration did not converge in " + std::to_string(opt.max_iter) + " iterations");
}

}  // namespace detail

class GibbsApproximation {
public:
  GibbsApproximation(std::shared_ptr<const WordSpace> space, std::vector<double> psi,
                     const PowerOptions& opt = {})
      : space_(std::move(space)), psi_(std::move(psi)) {
    const std::size_t n = space_->size();
    if (psi_.size() != n) throw std::invalid_argument("GibbsApproximation: psi size mismatch");
    // shift by max(psi) to keep e^psi well scaled; the pressure is shifted back
    double shift = 0.0;
    for (double x : psi_) shift = std::max(shift, x);
    std::vector<double> weight(n);
    for (std::size_t s = 0; s < n; ++s) weight[s] = std::exp(psi_[s] - shift);
    auto [rho_r, r] = detail::power_iteration(*space_, weight, false, opt);
    auto [rho_l, l] = detail::power_iteration(*space_, weight, true, opt);
    (void)rho_l;
    right_ = std::move(r);
    left_ = std::move(l);
    log_rho_scaled_ = std::log(rho_r);
    pressure_ = log_rho_scaled_ + shift;
    log_weights_.resize(n);
    std::vector<double> lw(n);
    for (std::size_t s = 0; s < n; ++s) lw[s] = std::log(left_[s]) + std::log(right_[s]);
    const double lz = log_sum_exp(lw);
    weights_.resize(n);
    for (std::size_t s = 0; s < n; ++s) {
      log_weights_[s] = lw[s] - lz;
      weights_[s] = std::exp(log_weights_[s]);
    }
    scaled_psi_ = std::move(weight);
    for (auto& x : scaled_psi_) x = std::log(x);
  }

  const WordSpace& space() const { return *space_; }
  std::shared_ptr<const WordSpace> space_ptr() const { return space_; }
  int depth() const { return space_->depth(); }
  double pressure() const { return pressure_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& log_weights() const { return log_weights_; }
  const std::vector<double>& eigenfunction() const { return right_; }
  const std::vector<double>& left_eigenvector() const { return left_; }
  const std::vector<double>& psi() const { return psi_; }

  /// log P(s -> s') of the stationary chain.
  double log_transition(std::size_t s, std::size_t t) const {
    return scaled_psi_[s] + std::log(right_[t]) - log_rho_scaled_ - std::log(right_[s]);
  }

  /// log nu of the cylinder of a symbol sequence (shift-invariant, so positions are irrelevant).
  double log_cylinder_weight(const std::vector<int>& w) const {
    const int m = depth();
    const int k = static_cast<int>(w.size());
    if (k == 0) return 0.0;
    for (int i = 0; i + 1 < k; ++i)
      if (!space_->sft().allowed(w[i], w[i + 1])) return -std::numeric_limits<double>::infinity();
    if (k <= m) {
      auto [lo, hi] = space_->prefix_range(w);
      if (lo == hi) return -std::numeric_limits<double>::infinity();
      std::vector<double> parts(log_weights_.begin() + static_cast<std::ptrdiff_t>(lo),
                                log_weights_.begin() + static_cast<std::ptrdiff_t>(hi));
      return log_sum_exp(parts);
    }
    std::vector<int> window(w.begin(), w.begin() + m);
    std::size_t s = space_->index_of(window);
    CompensatedSum acc;
    acc.add(log_weights_[s]);
    for (int i = m; i < k; ++i) {
      std::rotate(window.begin(), window.begin() + 1, window.end());
      window.back() = w[i];
      std::size_t t = space_->index_of(window);
      acc.add(log_transition(s, t));
      s = t;
    }
    return acc.value();
  }
  double cylinder_weight(const std::vector<int>& w) const { return std::exp(log_cylinder_weight(w)); }
  double cylinder_weight(const Word& w) const { return cylinder_weight(w.symbols); }

private:
  std::shared_ptr<const WordSpace> space_;
  std::vector<double> psi_, scaled_psi_;
  std::vector<double> right_, left_;
  std::vector<double> weights_, log_weights_;
  double pressure_ = 0.0;
  double log_rho_scaled_ = 0.0;
};

inline GibbsApproximation equilibrium(std::shared_ptr<const WordSpace> space, std::vector<double> psi,
                                      const PowerOptions& opt = {}) {
  return GibbsApproximation(std::move(space), std::move(psi), opt);
}

/// psi = phi at cylinder centers of the depth-m states.
inline GibbsApproximation equilibrium(const MarkovCoding& coding, const Potential& phi, int depth,
                                      const PowerOptions& opt = {}) {
  auto space = std::make_shared<const WordSpace>(coding.sft(), depth);
  auto psi = cylinder_values(*space, coding, phi);
  return GibbsApproximation(space, std::move(psi), opt);
}

/// Pressure only: log of the leading eigenvalue of the weighted transfer matrix.
inline double leading_log_eigenvalue(const WordSpace& space, const std::vector<double>& psi,
                                     const PowerOptions& opt = {}) {
  double shift = 0.0;
  for (double x : psi) shift = std::max(shift, x);
  std::vector<double> weight(psi.size());
  for (std::size_t s = 0; s < psi.size(); ++s) weight[s] = std::exp(psi[s] - shift);
  return std::log(detail::power_iteration(space, weight, false, opt).first) + shift;
}

// ---------------------------------------------------------------------------
// g-function: g(a_0 .. a_m) = nu(a_0 .. a_m) / nu(a_1 .. a_m)

class GFunction {
public:
  explicit GFunction(const GibbsApproximation& G) : G_(&G), depth_(G.depth() + 1) {
    if (G.depth() < 1) throw std::invalid_argument("g_function: depth must be >= 1");
    const auto& space = G.space();
    for (std::size_t s = 0; s < space.size(); ++s)
      for (int t : space.successors(s)) {
        std::vector<int> w = space.state(s);
        w.push_back(space.state(static_cast<std::size_t>(t)).back());
        words_.push_back(std::move(w));
        log_values_.push_back(log_edge(s, static_cast<std::size_t>(t)));
      }
  }

  int depth() const { return depth_; }
  std::size_t size() const { return words_.size(); }
  const std::vector<int>& word(std::size_t i) const { return words_[i]; }
  double value(std::size_t i) const { return std::exp(log_values_[i]); }
  double log_value(std::size_t i) const { return log_values_[i]; }

  /// g of a future word; only the first depth symbols are used.
  double log_g(const std::vector<int>& future) const {
    const int m = G_->depth();
    if (static_cast<int>(future.size()) < depth_)
      throw std::invalid_argument("g: future word shorter than the g-function depth");
    std::vector<int> a(future.begin(), future.begin() + m), b(future.begin() + 1, future.begin() + m + 1);
    const auto& space = G_->space();
    return log_edge(space.index_of(a), space.index_of(b));
  }
  double g(const std::vector<int>& future) const { return std::exp(log_g(future)); }

private:
  double log_edge(std::size_t s, std::size_t t) const {
    const double denom = G_->log_weights()[t];
    if (!std::isfinite(denom)) throw ZeroMassCylinder("zero mass denominator in g");
    return G_->log_weights()[s] + G_->log_transition(s, t) - denom;
  }

  const GibbsApproximation* G_;
  int depth_;
  std::vector<std::vector<int>> words_;
  std::vector<double> log_values_;
};

inline GFunction g_function(const GibbsApproximation& G) { return GFunction(G); }

/// Product density of nu restricted to [a] and normalized there, a being the
/// shared position-0 symbol: w- ends with a, w+ starts with a, and
/// rho = nu_a(w- w+) / (nu_a(w-) nu_a(w+)) = nu(w- w+) nu[a] / (nu(w-) nu(w+)).
inline double product_density(const GibbsApproximation& G, const std::vector<int>& w_minus,
                              const std::vector<int>& w_plus) {
  if (w_minus.empty() || w_plus.empty() || w_minus.back() != w_plus.front())
    throw std::invalid_argument("product_density: words must share the position-0 symbol");
  std::vector<int> joint(w_minus.begin(), w_minus.end() - 1);
  joint.insert(joint.end(), w_plus.begin(), w_plus.end());
  const double lj = G.log_cylinder_weight(joint);
  const double lm = G.log_cylinder_weight(w_minus);
  const double lp = G.log_cylinder_weight(w_plus);
  const double l0 = G.log_cylinder_weight(std::vector<int>{w_plus.front()});
  if (!std::isfinite(lj) || !std::isfinite(lm) || !std::isfinite(lp))
    throw ZeroMassCylinder("product_density: cylinder of zero mass");
  return std::exp(lj + l0 - lm - lp);
}

// ---------------------------------------------------------------------------
// Bowen constants

struct BowenReport {
  std::vector<int> orders;
  std::vector<double> per_order;  // C(n)
  double constant = 1.0;          // max over orders
};

/// snpsi(word) returns S_n psi at a representative point of the cylinder of the word.
inline BowenReport bowen_constant(const GibbsApproximation& G, const Sft& sft,
                                  const std::function<double(const Word&)>& snpsi,
                                  const std::vector<int>& orders) {
  BowenReport rep;
  rep.orders = orders;
  for (int n : orders) {
    if (n < 1 || n > G.depth()) throw std::invalid_argument("bowen_constant: order must be in [1, depth]");
    double hi = -std::numeric_limits<double>::infinity(), lo = std::numeric_limits<double>::infinity();
    std::vector<int> path;
    std::function<void()> rec = [&]() {
      if (static_cast<int>(path.size()) == n) {
        const double r = G.log_cylinder_weight(path) - (snpsi(Word{path, 0}) - n * G.pressure());
        hi = std::max(hi, r);
        lo = std::min(lo, r);
        return;
      }
      for (int b = 0; b < sft.alphabet_size; ++b)
        if (path.empty() || sft.allowed(path.back(), b)) {
          path.push_back(b);
          rec();
          path.pop_back();
        }
    };
    rec();
    const double c = std::exp(std::max(hi, -lo));
    rep.per_order.push_back(c);
    rep.constant = std::max(rep.constant, c);
  }
  return rep;
}

/// Bowen constant with S_n phi evaluated at the decoded cylinder center.
inline BowenReport bowen_constant(const GibbsApproximation& G, const MarkovCoding& coding,
                                  const Potential& phi, const std::vector<int>& orders) {
  const auto& L = coding.map();
  return bowen_constant(
      G, coding.sft(),
      [&](const Word& w) { return birkhoff_sum(phi, L, coding.decode(w).center, static_cast<int>(w.size())); },
      orders);
}

}  // namespace anosov
