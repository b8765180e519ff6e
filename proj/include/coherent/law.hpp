#pragma once

// Finite-support joint laws of opinion vectors and the example laws built
// from them.

#include "coherent/rational.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace coherent {

using Point = std::vector<Rational>;

struct Atom {
  Point point;
  Rational weight;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Joint law of k opinions with finitely many atoms.  Weights are positive
/// and sum to exactly 1; coordinates lie in [0,1]; atoms are distinct and
/// kept sorted lexicographically by point.
class DiscreteJointLaw {
 public:
  DiscreteJointLaw() = default;

  /// Normalizes by the total weight, merges equal points and drops zero
  /// weights.  Throws std::invalid_argument on bad input.
  static DiscreteJointLaw make(std::vector<Atom> atoms) {
    if (atoms.empty()) throw std::invalid_argument("law: no atoms");
    const std::size_t k = atoms.front().point.size();
    if (k == 0) throw std::invalid_argument("law: zero-dimensional points");
    Rational total;
    std::map<Point, Rational> merged;
    for (auto& a : atoms) {
      if (a.point.size() != k) throw std::invalid_argument("law: inconsistent dimension");
      if (a.weight.sign() < 0) throw std::invalid_argument("law: negative weight");
      for (const auto& v : a.point)
        if (v.sign() < 0 || v > Rational(1))
          throw std::invalid_argument("law: coordinate " + v.to_short_string() + " outside [0,1]");
      if (a.weight.is_zero()) continue;
      total += a.weight;
      merged[std::move(a.point)] += a.weight;
    }
    if (total.is_zero()) throw std::invalid_argument("law: total weight is zero");
    DiscreteJointLaw law;
    law.k_ = k;
    law.atoms_.reserve(merged.size());
    for (auto& [p, w] : merged) law.atoms_.push_back({p, w / total});
    return law;
  }

  std::size_t k() const { return k_; }
  std::size_t size() const { return atoms_.size(); }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const Atom& operator[](std::size_t i) const { return atoms_[i]; }

  friend bool operator==(const DiscreteJointLaw&, const DiscreteJointLaw&) = default;

 private:
  std::size_t k_ = 0;
  std::vector<Atom> atoms_;
};

inline DiscreteJointLaw make_law(std::vector<Atom> atoms) {
  return DiscreteJointLaw::make(std::move(atoms));
}

/// Split of each atom's mass between A and its complement, aligned with the
/// atoms of some law.
struct EventSplitWitness {
  struct Split {
    Rational on_a;
    Rational on_complement;
  };
  std::vector<Split> splits;

  /// phi at atom i: the A-fraction of that atom's mass.
  Rational phi(std::size_t i) const {
    const Rational w = splits[i].on_a + splits[i].on_complement;
    return w.is_zero() ? Rational(0) : splits[i].on_a / w;
  }
};

/// One coordinate's law: sorted distinct values with positive probabilities.
struct MarginalLaw {
  std::vector<std::pair<Rational, Rational>> atoms;  // (value, probability)

  Rational mean() const {
    Rational m;
    for (const auto& [v, w] : atoms) m += v * w;
    return m;
  }
  std::vector<Rational> support() const {
    std::vector<Rational> s;
    for (const auto& a : atoms) s.push_back(a.first);
    return s;
  }
};

inline MarginalLaw marginal(const DiscreteJointLaw& law, std::size_t coord) {
  if (coord >= law.k()) throw std::out_of_range("marginal: coordinate out of range");
  std::map<Rational, Rational> m;
  for (const auto& a : law.atoms()) m[a.point[coord]] += a.weight;
  MarginalLaw out;
  out.atoms.assign(m.begin(), m.end());
  return out;
}

/// Builds a marginal law from (value, weight) pairs, normalizing weights.
inline MarginalLaw make_marginal(std::vector<std::pair<Rational, Rational>> atoms) {
  std::vector<Atom> a;
  for (auto& [v, w] : atoms) a.push_back({{v}, w});
  const auto law = make_law(std::move(a));
  return marginal(law, 0);
}

inline std::vector<Rational> means(const DiscreteJointLaw& law) {
  std::vector<Rational> m(law.k());
  for (const auto& a : law.atoms())
    for (std::size_t i = 0; i < law.k(); ++i) m[i] += a.point[i] * a.weight;
  return m;
}

template <class F>
Rational expectation(const DiscreteJointLaw& law, F&& f) {
  Rational e;
  for (const auto& a : law.atoms()) e += Rational(f(a.point)) * a.weight;
  return e;
}

template <class Pred>
Rational probability(const DiscreteJointLaw& law, Pred&& pred) {
  Rational p;
  for (const auto& a : law.atoms())
    if (pred(a.point)) p += a.weight;
  return p;
}

struct Correlation {
  Rational covariance;
  Rational variance_product;  // Var X * Var Y
  double value = 0.0;
};

inline Correlation correlation(const DiscreteJointLaw& law) {
  if (law.k() != 2) throw std::invalid_argument("correlation: law must be bivariate");
  const auto m = means(law);
  Rational cov, vx, vy;
  for (const auto& a : law.atoms()) {
    const Rational dx = a.point[0] - m[0];
    const Rational dy = a.point[1] - m[1];
    cov += dx * dy * a.weight;
    vx += dx * dx * a.weight;
    vy += dy * dy * a.weight;
  }
  if (vx.is_zero() || vy.is_zero()) throw std::domain_error("correlation: zero variance");
  Correlation c{cov, vx * vy, 0.0};
  c.value = cov.to_double() / std::sqrt(c.variance_product.to_double());
  return c;
}

// ---------------------------------------------------------------------------
// Example laws.

/// Three-point law on (1-d,1-d), (0,1-d), (1-d,0) with weights
/// (1-d)/(1+d), d/(1+d), d/(1+d).
inline DiscreteJointLaw deldis(const Rational& delta) {
  if (delta.sign() <= 0 || delta >= Rational(1))
    throw std::invalid_argument("deldis: delta must lie in (0,1)");
  const Rational one(1);
  const Rational hi = one - delta;
  const Rational side = delta / (one + delta);
  return make_law({{{hi, hi}, hi / (one + delta)}, {{Rational(0), hi}, side}, {{hi, Rational(0)}, side}});
}

/// X = 1/2, Y ~ Bernoulli(1/2).
inline DiscreteJointLaw bernoulli_center() {
  const Rational half(1, 2);
  return make_law({{{half, Rational(0)}, half}, {{half, Rational(1)}, half}});
}

/// Each petal observer's conditional probability of the center.
inline Rational daisy_level(long n, const Rational& p) {
  if (n < 1) throw std::invalid_argument("daisy: n must be >= 1");
  const Rational nn(n);
  const Rational den = nn * p - p + Rational(1);
  return nn * p / den;
}

/// (n,p)-daisy: center atom (p_n,...,p_n) of weight p and n petal atoms
/// p_n * e_i of weight (1-p)/n.
inline DiscreteJointLaw daisy(long n, const Rational& p) {
  if (n < 1) throw std::invalid_argument("daisy: n must be >= 1");
  if (p.sign() < 0 || p > Rational(1)) throw std::invalid_argument("daisy: p must lie in [0,1]");
  const Rational level = daisy_level(n, p);
  const auto k = static_cast<std::size_t>(n);
  std::vector<Atom> atoms;
  atoms.push_back({Point(k, level), p});
  const Rational petal = (Rational(1) - p) / Rational(n);
  for (std::size_t i = 0; i < k; ++i) {
    Point pt(k, Rational(0));
    pt[i] = level;
    atoms.push_back({std::move(pt), petal});
  }
  return make_law(std::move(atoms));
}

/// (n-1,p)-daisy coordinates followed by the indicator of the daisy center.
inline DiscreteJointLaw dp80_attaining(long n, const Rational& p) {
  if (n < 2) throw std::invalid_argument("dp80_attaining: n must be >= 2");
  if (p.sign() < 0 || p > Rational(1)) throw std::invalid_argument("dp80_attaining: p must lie in [0,1]");
  const long petals = n - 1;
  const Rational level = daisy_level(petals, p);
  const auto k = static_cast<std::size_t>(n);
  std::vector<Atom> atoms;
  Point center(k, level);
  center.back() = Rational(1);
  atoms.push_back({std::move(center), p});
  const Rational petal = (Rational(1) - p) / Rational(petals);
  for (std::size_t i = 0; i + 1 < k; ++i) {
    Point pt(k, Rational(0));
    pt[i] = level;
    atoms.push_back({std::move(pt), petal});
  }
  return make_law(std::move(atoms));
}

/// Product law of two marginals.
inline DiscreteJointLaw product_law(const MarginalLaw& mx, const MarginalLaw& my) {
  std::vector<Atom> atoms;
  for (const auto& [x, wx] : mx.atoms)
    for (const auto& [y, wy] : my.atoms) atoms.push_back({{x, y}, wx * wy});
  return make_law(std::move(atoms));
}

/// X, Y independent, each distributed as (1-d) * Bernoulli(1-d).
inline DiscreteJointLaw independent_attaining(const Rational& delta) {
  if (delta.sign() <= 0 || delta >= Rational(1, 2))
    throw std::invalid_argument("independent_attaining: delta must lie in (0,1/2)");
  const Rational hi = Rational(1) - delta;
  const auto m = make_marginal({{Rational(0), delta}, {hi, hi}});
  return product_law(m, m);
}

enum class Reflection { Swap, Complement, Both };

inline DiscreteJointLaw reflect(const DiscreteJointLaw& law, Reflection mode) {
  if (law.k() != 2) throw std::invalid_argument("reflect: law must be bivariate");
  const Rational one(1);
  std::vector<Atom> atoms;
  for (const auto& a : law.atoms()) {
    const auto& x = a.point[0];
    const auto& y = a.point[1];
    switch (mode) {
      case Reflection::Swap: atoms.push_back({{y, x}, a.weight}); break;
      case Reflection::Complement: atoms.push_back({{one - x, one - y}, a.weight}); break;
      case Reflection::Both: atoms.push_back({{one - y, one - x}, a.weight}); break;
    }
  }
  return make_law(std::move(atoms));
}

inline DiscreteJointLaw mix(std::span<const DiscreteJointLaw> laws, std::span<const Rational> weights) {
  if (laws.empty() || laws.size() != weights.size())
    throw std::invalid_argument("mix: need one weight per law");
  Rational total;
  for (const auto& w : weights) {
    if (w.sign() < 0) throw std::invalid_argument("mix: negative weight");
    total += w;
  }
  if (total != Rational(1)) throw std::invalid_argument("mix: weights must sum to 1");
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < laws.size(); ++i) {
    if (laws[i].k() != laws.front().k()) throw std::invalid_argument("mix: dimension mismatch");
    for (const auto& a : laws[i].atoms()) atoms.push_back({a.point, a.weight * weights[i]});
  }
  return make_law(std::move(atoms));
}

inline DiscreteJointLaw mix(const DiscreteJointLaw& a, const DiscreteJointLaw& b, const Rational& lambda) {
  const DiscreteJointLaw laws[] = {a, b};
  const Rational w[] = {lambda, Rational(1) - lambda};
  return mix(laws, w);
}

}  // namespace coherent
