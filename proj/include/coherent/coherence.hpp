#pragma once

// Exact coherence decisions for discrete joint laws, together with the
// auxiliary checkers: opposite-sign threshold certificates, the threshold
// criterion for independent pairs, the interval-union (Strassen) inequality
// and the conditional-probability gap inequality on finite spaces.

#include "coherent/law.hpp"
#include "coherent/lp.hpp"
#include "coherent/rational.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace coherent {

/// Thresholds a <= b such that X < a exactly when Y > b (or, when
/// `swapped`, Y < a exactly when X > b), with the shared event non-null.
struct QuickCertificate {
  Rational a;
  Rational b;
  bool swapped = false;
};

enum class Coherence { Coherent, Incoherent };

inline const char* to_string(Coherence c) { return c == Coherence::Coherent ? "Coherent" : "Incoherent"; }

struct CoherenceVerdict {
  Coherence status = Coherence::Incoherent;
  EventSplitWitness witness;             // Coherent
  std::vector<Rational> farkas;          // Incoherent, over coherence_lp rows
  std::optional<QuickCertificate> quick; // Incoherent, when a threshold pair exists

  bool coherent() const { return status == Coherence::Coherent; }
};

/// Row bookkeeping for the coherence LP.
struct CoherenceRow {
  enum class Kind { AtomMass, Marginal } kind = Kind::AtomMass;
  std::size_t atom = 0;   // AtomMass
  std::size_t coord = 0;  // Marginal
  Rational value;         // Marginal
};

/// Feasibility LP in variables (a_s, b_s) = (mass on A, mass on A^c) for each
/// atom s, laid out as [a_0, b_0, a_1, b_1, ...]:
///   a_s + b_s = w_s                                  for every atom s
///   sum_{s : s_i = v} a_s = v * P(X_i = v)            for every coordinate i and value v
inline LinearProgram coherence_lp(const DiscreteJointLaw& law, std::vector<CoherenceRow>* rows = nullptr) {
  const std::size_t n = law.size();
  LinearProgram lp(2 * n);
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<Rational> row(2 * n);
    row[2 * s] = Rational(1);
    row[2 * s + 1] = Rational(1);
    lp.add_constraint(std::move(row), Relation::Equal, law[s].weight);
    if (rows) rows->push_back({CoherenceRow::Kind::AtomMass, s, 0, {}});
  }
  for (std::size_t i = 0; i < law.k(); ++i) {
    std::map<Rational, std::vector<std::size_t>> groups;
    for (std::size_t s = 0; s < n; ++s) groups[law[s].point[i]].push_back(s);
    for (const auto& [v, members] : groups) {
      std::vector<Rational> row(2 * n);
      Rational mass;
      for (std::size_t s : members) {
        row[2 * s] = Rational(1);
        mass += law[s].weight;
      }
      lp.add_constraint(std::move(row), Relation::Equal, v * mass);
      if (rows) rows->push_back({CoherenceRow::Kind::Marginal, 0, i, v});
    }
  }
  return lp;
}

/// Checks the marginal equations for a witness directly against the law.
inline bool verify_witness(const DiscreteJointLaw& law, const EventSplitWitness& w) {
  if (w.splits.size() != law.size()) return false;
  for (std::size_t s = 0; s < law.size(); ++s) {
    const auto& sp = w.splits[s];
    if (sp.on_a.sign() < 0 || sp.on_complement.sign() < 0) return false;
    if (sp.on_a + sp.on_complement != law[s].weight) return false;
  }
  for (std::size_t i = 0; i < law.k(); ++i) {
    std::map<Rational, std::pair<Rational, Rational>> acc;  // value -> (sum a, sum w)
    for (std::size_t s = 0; s < law.size(); ++s) {
      auto& e = acc[law[s].point[i]];
      e.first += w.splits[s].on_a;
      e.second += law[s].weight;
    }
    for (const auto& [v, e] : acc)
      if (e.first != v * e.second) return false;
  }
  return true;
}

/// Scans a (and b) over support values, midpoints of consecutive values and
/// the endpoints 0 and 1.
inline std::optional<QuickCertificate> quick_incoherence(const DiscreteJointLaw& law);

inline bool verify_quick_certificate(const DiscreteJointLaw& law, const QuickCertificate& c) {
  if (law.k() != 2) return false;
  if (c.a.sign() < 0 || c.b < c.a || c.b > Rational(1)) return false;
  const std::size_t u = c.swapped ? 1 : 0;
  const std::size_t v = 1 - u;
  Rational upper;
  for (const auto& atom : law.atoms()) {
    const Rational prod = (atom.point[u] - c.a) * (atom.point[v] - c.b);
    if (prod.sign() >= 0) return false;
    if (atom.point[v] > c.b) upper += atom.weight;
  }
  return upper.sign() > 0;
}

namespace detail {

inline std::vector<Rational> threshold_candidates(const MarginalLaw& m) {
  std::set<Rational> c{Rational(0), Rational(1)};
  const auto s = m.support();
  for (std::size_t i = 0; i < s.size(); ++i) {
    c.insert(s[i]);
    if (i + 1 < s.size()) c.insert((s[i] + s[i + 1]) / Rational(2));
  }
  return {c.begin(), c.end()};
}

}  // namespace detail

inline std::optional<QuickCertificate> quick_incoherence(const DiscreteJointLaw& law) {
  if (law.k() != 2) throw std::invalid_argument("quick_incoherence: law must be bivariate");
  for (bool swapped : {false, true}) {
    const auto ca = detail::threshold_candidates(marginal(law, swapped ? 1 : 0));
    const auto cb = detail::threshold_candidates(marginal(law, swapped ? 0 : 1));
    for (const auto& a : ca)
      for (const auto& b : cb) {
        if (b < a) continue;
        QuickCertificate c{a, b, swapped};
        if (verify_quick_certificate(law, c)) return c;
      }
  }
  return std::nullopt;
}

/// Decides coherence through the event-split feasibility LP.
inline CoherenceVerdict check_coherence(const DiscreteJointLaw& law, bool use_float_basis = false) {
  const LinearProgram lp = coherence_lp(law);
  const LpOutcome out = use_float_basis ? solve_float_then_certify(lp) : solve_exact(lp);
  CoherenceVerdict v;
  if (out.status == LpStatus::Optimal) {
    v.status = Coherence::Coherent;
    v.witness.splits.resize(law.size());
    for (std::size_t s = 0; s < law.size(); ++s)
      v.witness.splits[s] = {out.solution[2 * s], out.solution[2 * s + 1]};
  } else {
    v.status = Coherence::Incoherent;
    v.farkas = out.certificate;
    if (law.k() == 2) v.quick = quick_incoherence(law);
  }
  return v;
}

/// Independent re-check of a verdict: the witness against the marginal
/// equations, or the Farkas vector against the coherence LP.
inline VerificationReport verify_verdict(const DiscreteJointLaw& law, const CoherenceVerdict& v) {
  if (v.coherent()) {
    if (!verify_witness(law, v.witness)) return {false, "witness fails marginal equations"};
    return {};
  }
  LpOutcome out;
  out.status = LpStatus::Infeasible;
  out.certificate = v.farkas;
  auto r = verify_outcome(coherence_lp(law), out);
  if (!r.ok) return r;
  if (v.quick && !verify_quick_certificate(law, *v.quick)) return {false, "quick certificate invalid"};
  return {};
}

// ---------------------------------------------------------------------------
// Independent pairs.

/// B = {X >= s_value}, C = {Y >= t_value}; excess = LHS - RHS > 0.
struct ThresholdViolation {
  Rational s_value;
  Rational t_value;
  Rational excess;
};

struct IndependentPairVerdict {
  bool coherent = false;
  bool equal_means = false;
  std::vector<ThresholdViolation> violations;
};

/// For independent X ~ mu_x, Y ~ mu_y with a common mean p, checks
///   E[X; X > s] + E[Y; Y > t] <= p + P(X > s) P(Y > t)
/// at thresholds just below each support value.
inline IndependentPairVerdict check_independent_pair(const MarginalLaw& mu_x, const MarginalLaw& mu_y) {
  IndependentPairVerdict v;
  const Rational p = mu_x.mean();
  v.equal_means = p == mu_y.mean();
  if (!v.equal_means) return v;
  // Upper tails at each support value (sorted ascending, so walk backwards).
  auto tails = [](const MarginalLaw& m) {
    std::vector<std::pair<Rational, Rational>> t(m.atoms.size());  // (E[V; V >= v], P(V >= v))
    Rational e, pr;
    for (std::size_t i = m.atoms.size(); i-- > 0;) {
      e += m.atoms[i].first * m.atoms[i].second;
      pr += m.atoms[i].second;
      t[i] = {e, pr};
    }
    return t;
  };
  const auto tx = tails(mu_x);
  const auto ty = tails(mu_y);
  for (std::size_t i = 0; i < tx.size(); ++i)
    for (std::size_t j = 0; j < ty.size(); ++j) {
      const Rational lhs = tx[i].first + ty[j].first;
      const Rational rhs = p + tx[i].second * ty[j].second;
      if (lhs > rhs) v.violations.push_back({mu_x.atoms[i].first, mu_y.atoms[j].first, lhs - rhs});
    }
  v.coherent = v.violations.empty();
  return v;
}

// ---------------------------------------------------------------------------
// Interval unions and the Strassen inequality.

struct Interval {
  Rational lo;
  Rational hi;
  bool lo_closed = true;
  bool hi_closed = true;

  bool contains(const Rational& v) const {
    const bool above = lo_closed ? v >= lo : v > lo;
    const bool below = hi_closed ? v <= hi : v < hi;
    return above && below;
  }
  static Interval point(const Rational& v) { return {v, v, true, true}; }
};

struct IntervalUnion {
  std::vector<Interval> parts;

  bool contains(const Rational& v) const {
    for (const auto& i : parts)
      if (i.contains(v)) return true;
    return false;
  }
  void validate() const {
    for (const auto& i : parts) {
      if (i.lo.sign() < 0 || i.hi > Rational(1)) throw std::invalid_argument("interval outside [0,1]");
      if (i.hi < i.lo) throw std::invalid_argument("interval with hi < lo");
      if (i.hi == i.lo && !(i.lo_closed && i.hi_closed))
        throw std::invalid_argument("empty degenerate interval");
    }
  }
  static IntervalUnion full() { return {{{Rational(0), Rational(1), true, true}}}; }
  static IntervalUnion of_points(const std::vector<Rational>& pts) {
    IntervalUnion u;
    for (const auto& p : pts) u.parts.push_back(Interval::point(p));
    return u;
  }
};

struct StrassenResult {
  bool holds = false;
  Rational slack;  // LHS - RHS; holds iff <= 0
};

/// E[X; X in B] + E[Y; Y in C] - p - P(X in B, Y in C).
inline StrassenResult strassen_check(const DiscreteJointLaw& law, const IntervalUnion& b, const IntervalUnion& c) {
  if (law.k() != 2) throw std::invalid_argument("strassen_check: law must be bivariate");
  b.validate();
  c.validate();
  const auto m = means(law);
  if (m[0] != m[1]) throw std::invalid_argument("strassen_check: unequal means");
  Rational slack = -m[0];
  for (const auto& a : law.atoms()) {
    const bool in_b = b.contains(a.point[0]);
    const bool in_c = c.contains(a.point[1]);
    if (in_b) slack += a.point[0] * a.weight;
    if (in_c) slack += a.point[1] * a.weight;
    if (in_b && in_c) slack -= a.weight;
  }
  return {slack.sign() <= 0, slack};
}

/// Runs strassen_check over every pair of subsets of the two marginal
/// supports (any interval union meets a finite support in such a subset).
/// Unequal means count as a failure.
inline bool strassen_holds_on_supports(const DiscreteJointLaw& law) {
  const auto m = means(law);
  if (m[0] != m[1]) return false;
  const auto sx = marginal(law, 0).support();
  const auto sy = marginal(law, 1).support();
  if (sx.size() > 20 || sy.size() > 20) throw std::invalid_argument("strassen_holds_on_supports: support too large");
  auto subset = [](const std::vector<Rational>& s, unsigned long mask) {
    std::vector<Rational> out;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (mask >> i & 1UL) out.push_back(s[i]);
    return IntervalUnion::of_points(out);
  };
  for (unsigned long mb = 0; mb < (1UL << sx.size()); ++mb) {
    const auto b = subset(sx, mb);
    for (unsigned long mc = 0; mc < (1UL << sy.size()); ++mc)
      if (!strassen_check(law, b, subset(sy, mc)).holds) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Gap inequality on a finite space:
//   |P(A|G) - P(A|H)| <= 1 - P(GH) / (P(G) + P(H) - P(GH)).

using AtomSet = std::vector<bool>;

enum class GapEquality {
  None,
  DisjointAIsG,        // G and H disjoint, A = G
  GInsideHAIsG,        // G inside H, A = G
  HInsideGAIsGMinusH,  // H inside G, A = G \ H
  GEqualsH,            // G = H up to null sets; both sides vanish
};

inline const char* to_string(GapEquality e) {
  switch (e) {
    case GapEquality::None: return "none";
    case GapEquality::DisjointAIsG: return "G,H disjoint and A=G";
    case GapEquality::GInsideHAIsG: return "G inside H and A=G";
    case GapEquality::HInsideGAIsGMinusH: return "H inside G and A=G\\H";
    case GapEquality::GEqualsH: return "G=H a.s.";
  }
  return "?";
}

struct GapLemmaReport {
  Rational lhs;
  Rational rhs;
  bool holds = false;
  bool equality = false;
  GapEquality equality_case = GapEquality::None;
  bool swapped = false;  // case matched with G and H exchanged
};

namespace detail {

/// Case match on (p,q,r,a,b,c) = masses of GH^c, GH, G^cH and the
/// A-fractions on those pieces (0 on null pieces).
inline GapEquality match_gap_case(std::span<const Rational> w, const AtomSet& a, const AtomSet& g, const AtomSet& h) {
  Rational p, q, r, pa, qa, ra;
  for (std::size_t s = 0; s < w.size(); ++s) {
    Rational* mass = nullptr;
    Rational* amass = nullptr;
    if (g[s] && !h[s]) { mass = &p; amass = &pa; }
    else if (g[s] && h[s]) { mass = &q; amass = &qa; }
    else if (!g[s] && h[s]) { mass = &r; amass = &ra; }
    if (!mass) continue;
    *mass += w[s];
    if (a[s]) *amass += w[s];
  }
  auto frac = [](const Rational& num, const Rational& den) { return den.is_zero() ? Rational(0) : num / den; };
  const Rational fa = frac(pa, p), fb = frac(qa, q), fc = frac(ra, r);
  const Rational one(1);
  const bool pp = p.sign() > 0, qp = q.sign() > 0, rp = r.sign() > 0;
  if (pp && !qp && rp && fa == one && fb.is_zero() && fc.is_zero()) return GapEquality::DisjointAIsG;
  if (!pp && qp && rp && fa.is_zero() && fb == one && fc.is_zero()) return GapEquality::GInsideHAIsG;
  if (pp && qp && !rp && fa == one && fb.is_zero() && fc.is_zero()) return GapEquality::HInsideGAIsGMinusH;
  return GapEquality::None;
}

}  // namespace detail

inline GapLemmaReport verify_gap_lemma(std::span<const Rational> weights, const AtomSet& a, const AtomSet& g,
                                       const AtomSet& h) {
  const std::size_t n = weights.size();
  if (a.size() != n || g.size() != n || h.size() != n)
    throw std::invalid_argument("verify_gap_lemma: subset size mismatch");
  Rational pg, ph, pgh, pag, pah;
  for (std::size_t s = 0; s < n; ++s) {
    if (weights[s].sign() < 0) throw std::invalid_argument("verify_gap_lemma: negative weight");
    if (g[s]) pg += weights[s];
    if (h[s]) ph += weights[s];
    if (g[s] && h[s]) pgh += weights[s];
    if (a[s] && g[s]) pag += weights[s];
    if (a[s] && h[s]) pah += weights[s];
  }
  if (pg.is_zero() || ph.is_zero()) throw std::domain_error("verify_gap_lemma: conditioning on a null set");
  GapLemmaReport rep;
  rep.lhs = abs(pag / pg - pah / ph);
  rep.rhs = Rational(1) - pgh / (pg + ph - pgh);
  rep.holds = rep.lhs <= rep.rhs;
  rep.equality = rep.lhs == rep.rhs;
  if (!rep.equality) return rep;
  rep.equality_case = detail::match_gap_case(weights, a, g, h);
  if (rep.equality_case == GapEquality::None) {
    rep.equality_case = detail::match_gap_case(weights, a, h, g);
    rep.swapped = rep.equality_case != GapEquality::None;
  }
  if (rep.equality_case == GapEquality::None && pg == pgh && ph == pgh) rep.equality_case = GapEquality::GEqualsH;
  return rep;
}

}  // namespace coherent
