#pragma once

// Suprema of E t(X,Y) over coherent laws supported on a fixed finite grid,
// plus the sweeps, mean-constrained variants and search heuristics built on
// top of that LP.

#include "coherent/bounds.hpp"
#include "coherent/coherence.hpp"
#include "coherent/law.hpp"
#include "coherent/lp.hpp"
#include "coherent/rational.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace coherent {

/// Sorted distinct values for X and for Y, all in [0,1].
struct Grid {
  std::vector<Rational> x_values;
  std::vector<Rational> y_values;

  static Grid make(std::vector<Rational> xs, std::vector<Rational> ys) {
    auto norm = [](std::vector<Rational>& v, const char* which) {
      if (v.empty()) throw std::invalid_argument(std::string("grid: empty ") + which + " values");
      for (const auto& r : v)
        if (r.sign() < 0 || r > Rational(1))
          throw std::invalid_argument(std::string("grid: ") + which + " value " + r.to_short_string() +
                                      " outside [0,1]");
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    norm(xs, "x");
    norm(ys, "y");
    return {std::move(xs), std::move(ys)};
  }

  static Grid square(std::vector<Rational> values) { return make(values, values); }

  std::size_t nx() const { return x_values.size(); }
  std::size_t ny() const { return y_values.size(); }

  bool contains_x(const Rational& v) const { return std::binary_search(x_values.begin(), x_values.end(), v); }
  bool contains_y(const Rational& v) const { return std::binary_search(y_values.begin(), y_values.end(), v); }

  Grid with_points(const std::vector<Rational>& xs, const std::vector<Rational>& ys) const {
    auto gx = x_values;
    auto gy = y_values;
    gx.insert(gx.end(), xs.begin(), xs.end());
    gy.insert(gy.end(), ys.begin(), ys.end());
    return make(std::move(gx), std::move(gy));
  }

  Grid swapped() const { return {y_values, x_values}; }

  Grid complemented() const {
    auto flip = [](const std::vector<Rational>& v) {
      std::vector<Rational> out;
      for (const auto& r : v) out.push_back(Rational(1) - r);
      return out;
    };
    return make(flip(x_values), flip(y_values));
  }

  friend bool operator==(const Grid&, const Grid&) = default;
};

/// {0, 1/(n-1), ..., 1}.
inline std::vector<Rational> uniform_values(long n) {
  if (n < 2) throw std::invalid_argument("uniform grid needs at least 2 points");
  std::vector<Rational> v;
  for (long i = 0; i < n; ++i) v.emplace_back(i, n - 1);
  return v;
}

inline Grid uniform_grid(long n) { return Grid::square(uniform_values(n)); }

/// Adds {0, delta, 1-delta, 1} to both coordinates so the known attaining
/// laws for the gap indicator are supported on the grid.
inline Grid augment_attaining(const Grid& g, const Rational& delta) {
  const std::vector<Rational> extra{Rational(0), delta, Rational(1) - delta, Rational(1)};
  return g.with_points(extra, extra);
}

enum class TargetKind { GapIndicator, MaxXY, AbsDiffPow, ProductXY, CustomTable };

struct TargetFunction {
  TargetKind kind = TargetKind::GapIndicator;
  Rational delta;                            // GapIndicator
  long power = 1;                            // AbsDiffPow, integer exponent
  std::optional<double> real_power;          // AbsDiffPow, non-integer exponent
  std::vector<std::vector<Rational>> table;  // CustomTable, indexed [x][y] by grid position

  /// 1(|x - y| >= 1 - delta), weak inequality.
  static TargetFunction gap_indicator(Rational delta) {
    TargetFunction t;
    t.kind = TargetKind::GapIndicator;
    t.delta = std::move(delta);
    return t;
  }
  static TargetFunction max_xy() { return {TargetKind::MaxXY}; }
  static TargetFunction product_xy() { return {TargetKind::ProductXY}; }
  static TargetFunction abs_diff_pow(long r) {
    if (r < 1) throw std::invalid_argument("abs_diff_pow: integer exponent must be >= 1");
    TargetFunction t{TargetKind::AbsDiffPow};
    t.power = r;
    return t;
  }
  /// |x - y|^r for real r > 0; integer values fall back to the exact path.
  static TargetFunction abs_diff_pow_real(double r) {
    if (!(r > 0) || !std::isfinite(r)) throw std::invalid_argument("abs_diff_pow: exponent must be > 0");
    if (r == std::floor(r)) return abs_diff_pow(static_cast<long>(r));
    TargetFunction t{TargetKind::AbsDiffPow};
    t.real_power = r;
    return t;
  }
  static TargetFunction custom(std::vector<std::vector<Rational>> table) {
    TargetFunction t{TargetKind::CustomTable};
    t.table = std::move(table);
    return t;
  }

  bool exact() const { return !real_power.has_value(); }

  Rational eval(const Rational& x, const Rational& y, std::size_t i = 0, std::size_t j = 0) const {
    switch (kind) {
      case TargetKind::GapIndicator: return abs(x - y) >= Rational(1) - delta ? Rational(1) : Rational(0);
      case TargetKind::MaxXY: return max(x, y);
      case TargetKind::ProductXY: return x * y;
      case TargetKind::AbsDiffPow:
        if (real_power) throw std::logic_error("abs_diff_pow with real exponent has no exact value");
        return pow(abs(x - y), power);
      case TargetKind::CustomTable: return table.at(i).at(j);
    }
    return Rational(0);
  }

  double eval_float(const Rational& x, const Rational& y, std::size_t i = 0, std::size_t j = 0) const {
    if (kind == TargetKind::AbsDiffPow && real_power)
      return std::pow(std::fabs(x.to_double() - y.to_double()), *real_power);
    return eval(x, y, i, j).to_double();
  }

  std::string name() const {
    switch (kind) {
      case TargetKind::GapIndicator: return "gap_indicator(" + delta.to_short_string() + ")";
      case TargetKind::MaxXY: return "max_xy";
      case TargetKind::ProductXY: return "product_xy";
      case TargetKind::AbsDiffPow:
        return "abs_diff_pow(" + (real_power ? std::to_string(*real_power) : std::to_string(power)) + ")";
      case TargetKind::CustomTable: return "custom_table";
    }
    return "?";
  }
};

enum class SolveMode { Exact, FloatCertified };

struct ExtremalResult {
  Rational value;            // exact optimum (meaningful when `exact`)
  double value_float = 0.0;  // display value, or the optimum itself when !exact
  bool exact = true;
  DiscreteJointLaw law;
  EventSplitWitness witness;  // aligned with law.atoms()
  Grid grid;
  std::optional<Rational> mean_constraint;
  std::size_t pivots = 0;
};

/// Thrown when a post-solve invariant fails; indicates a bug, not an answer.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {

/// Grid coherence LP.  Variables (a_ij, b_ij) at indices 2(i*ny+j), 2(i*ny+j)+1.
inline LinearProgram grid_lp(const Grid& g, const std::optional<Rational>& mean) {
  const std::size_t nx = g.nx(), ny = g.ny(), nv = 2 * nx * ny;
  auto a = [&](std::size_t i, std::size_t j) { return 2 * (i * ny + j); };
  LinearProgram lp(nv);
  lp.add_constraint(std::vector<Rational>(nv, Rational(1)), Relation::Equal, Rational(1));
  for (std::size_t i = 0; i < nx; ++i) {
    std::vector<Rational> row(nv);
    const Rational& x = g.x_values[i];
    for (std::size_t j = 0; j < ny; ++j) {
      row[a(i, j)] = Rational(1) - x;
      row[a(i, j) + 1] = -x;
    }
    lp.add_constraint(std::move(row), Relation::Equal, Rational(0));
  }
  for (std::size_t j = 0; j < ny; ++j) {
    std::vector<Rational> row(nv);
    const Rational& y = g.y_values[j];
    for (std::size_t i = 0; i < nx; ++i) {
      row[a(i, j)] = Rational(1) - y;
      row[a(i, j) + 1] = -y;
    }
    lp.add_constraint(std::move(row), Relation::Equal, Rational(0));
  }
  if (mean) {
    std::vector<Rational> row(nv);
    for (std::size_t i = 0; i < nx; ++i)
      for (std::size_t j = 0; j < ny; ++j) {
        row[a(i, j)] = g.x_values[i];
        row[a(i, j) + 1] = g.x_values[i];
      }
    lp.add_constraint(std::move(row), Relation::Equal, *mean);
  }
  return lp;
}

inline ExtremalResult package(const Grid& g, const std::vector<Rational>& sol,
                              const std::optional<Rational>& mean) {
  const std::size_t ny = g.ny();
  std::vector<Atom> atoms;
  std::map<Point, EventSplitWitness::Split> split;
  for (std::size_t i = 0; i < g.nx(); ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      const auto& av = sol[2 * (i * ny + j)];
      const auto& bv = sol[2 * (i * ny + j) + 1];
      const Rational w = av + bv;
      if (w.is_zero()) continue;
      Point pt{g.x_values[i], g.y_values[j]};
      atoms.push_back({pt, w});
      split[pt] = {av, bv};
    }
  ExtremalResult r;
  r.law = make_law(std::move(atoms));
  for (const auto& atom : r.law.atoms()) r.witness.splits.push_back(split.at(atom.point));
  r.grid = g;
  r.mean_constraint = mean;
  return r;
}

inline void check_result_invariants(const ExtremalResult& r, const TargetFunction& t) {
  if (!verify_witness(r.law, r.witness)) throw InvariantViolation("extremal: witness fails marginal equations");
  const auto m = means(r.law);
  if (m[0] != m[1]) throw InvariantViolation("extremal: unequal means in optimal law");
  if (r.mean_constraint && m[0] != *r.mean_constraint)
    throw InvariantViolation("extremal: mean constraint violated");
  for (const auto& atom : r.law.atoms())
    if (!r.grid.contains_x(atom.point[0]) || !r.grid.contains_y(atom.point[1]))
      throw InvariantViolation("extremal: law leaves the grid");
  if (r.exact) {
    Rational v;
    for (const auto& atom : r.law.atoms()) {
      const auto i = static_cast<std::size_t>(
          std::lower_bound(r.grid.x_values.begin(), r.grid.x_values.end(), atom.point[0]) - r.grid.x_values.begin());
      const auto j = static_cast<std::size_t>(
          std::lower_bound(r.grid.y_values.begin(), r.grid.y_values.end(), atom.point[1]) - r.grid.y_values.begin());
      v += t.eval(atom.point[0], atom.point[1], i, j) * atom.weight;
    }
    if (v != r.value) throw InvariantViolation("extremal: objective does not re-evaluate to the optimum");
  }
}

}  // namespace detail

/// sup E t(X,Y) over coherent laws on the grid (optionally with E X = p).
/// Returns nullopt when no coherent law lives on the grid (or none with mean p).
inline std::optional<ExtremalResult> optimize_target(const Grid& g, const TargetFunction& t,
                                                     const std::optional<Rational>& mean = std::nullopt,
                                                     SolveMode mode = SolveMode::Exact) {
  if (t.kind == TargetKind::CustomTable) {
    if (t.table.size() != g.nx()) throw std::invalid_argument("custom_table: row count != x grid size");
    for (const auto& row : t.table)
      if (row.size() != g.ny()) throw std::invalid_argument("custom_table: column count != y grid size");
  }
  if (t.kind == TargetKind::GapIndicator && (t.delta.sign() < 0 || t.delta > Rational(1)))
    throw std::invalid_argument("gap_indicator: delta must lie in [0,1]");
  LinearProgram lp = detail::grid_lp(g, mean);
  const std::size_t ny = g.ny();

  if (!t.exact()) {
    std::vector<double> obj(lp.num_variables());
    for (std::size_t i = 0; i < g.nx(); ++i)
      for (std::size_t j = 0; j < ny; ++j) {
        const double v = t.eval_float(g.x_values[i], g.y_values[j], i, j);
        obj[2 * (i * ny + j)] = v;
        obj[2 * (i * ny + j) + 1] = v;
      }
    const auto out = solve_float_objective(lp, obj);
    if (out.status != LpStatus::Optimal) return std::nullopt;
    auto r = detail::package(g, out.solution, mean);
    r.exact = false;
    r.value_float = out.value;
    detail::check_result_invariants(r, t);
    return r;
  }

  for (std::size_t i = 0; i < g.nx(); ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      const Rational v = t.eval(g.x_values[i], g.y_values[j], i, j);
      lp.objective[2 * (i * ny + j)] = v;
      lp.objective[2 * (i * ny + j) + 1] = v;
    }
  const LpOutcome out = mode == SolveMode::Exact ? solve_exact(lp) : solve_float_then_certify(lp);
  if (out.status == LpStatus::Infeasible) return std::nullopt;
  if (out.status == LpStatus::Unbounded) throw InvariantViolation("extremal: bounded LP reported unbounded");
  auto r = detail::package(g, out.solution, mean);
  r.value = out.value;
  r.value_float = out.value.to_double();
  r.pivots = out.pivots;
  detail::check_result_invariants(r, t);
  return r;
}

/// Grid-restricted sup P(|X - Y| >= 1 - delta).
inline std::optional<ExtremalResult> eps_grid(const Rational& delta, const Grid& g,
                                              SolveMode mode = SolveMode::Exact) {
  return optimize_target(g, TargetFunction::gap_indicator(delta), std::nullopt, mode);
}

/// Same with E X = E Y = p.
inline std::optional<ExtremalResult> eps_fixed_mean(const Rational& delta, const Rational& p, const Grid& g,
                                                    SolveMode mode = SolveMode::Exact) {
  if (p.sign() < 0 || p > Rational(1)) throw std::invalid_argument("eps_fixed_mean: p must lie in [0,1]");
  return optimize_target(g, TargetFunction::gap_indicator(delta), p, mode);
}

/// Best single X value from y_grid ∪ {delta}, with Y free on y_grid.
inline std::optional<ExtremalResult> eps_one_by_n(const Rational& delta, const std::vector<Rational>& y_grid,
                                                  SolveMode mode = SolveMode::Exact) {
  if (delta.sign() < 0 || delta > Rational(1)) throw std::invalid_argument("eps_one_by_n: delta must lie in [0,1]");
  std::set<Rational> candidates(y_grid.begin(), y_grid.end());
  candidates.insert(delta);
  std::optional<ExtremalResult> best;
  for (const auto& x : candidates) {
    auto r = eps_grid(delta, Grid::make({x}, y_grid), mode);
    if (r && (!best || r->value > best->value)) best = std::move(r);
  }
  return best;
}

/// sup E|X - Y|^r on the grid.
inline std::optional<ExtremalResult> sup_moment(long r, const Grid& g, const std::optional<Rational>& mean = std::nullopt,
                                                SolveMode mode = SolveMode::Exact) {
  return optimize_target(g, TargetFunction::abs_diff_pow(r), mean, mode);
}

inline std::optional<ExtremalResult> sup_moment_real(double r, const Grid& g,
                                                     const std::optional<Rational>& mean = std::nullopt) {
  return optimize_target(g, TargetFunction::abs_diff_pow_real(r), mean, SolveMode::FloatCertified);
}

/// 2p(1-p)/(1-delta).
inline Rational markov_bound_check(const Rational& delta, const Rational& p) { return bounds::markov(delta, p); }

// ---------------------------------------------------------------------------
// Sweeps.

/// Runs fn(i) for i in [0, count) on up to `threads` workers.
inline void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  const unsigned n = std::min<unsigned>(threads, static_cast<unsigned>(count));
  for (unsigned w = 0; w < n; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct SweepRow {
  Rational delta;
  std::optional<ExtremalResult> result;
  Rational lower;  // 2d/(1+d), the three-point law
  Rational upper;  // (2d) ∧ 1
  bool lower_applicable = false;  // grid carries {0, 1-d} on both axes

  bool within_bounds() const {
    if (!result) return false;
    if (result->value > upper) return false;
    return !lower_applicable || result->value >= lower;
  }
};

inline std::vector<SweepRow> eps_sweep(const std::vector<Rational>& deltas,
                                       const std::function<Grid(const Rational&)>& grid_for,
                                       SolveMode mode = SolveMode::Exact, unsigned threads = 1) {
  std::vector<SweepRow> rows(deltas.size());
  parallel_for(deltas.size(), threads, [&](std::size_t k) {
    const Rational& d = deltas[k];
    if (d.sign() < 0 || d > Rational(1)) throw std::invalid_argument("eps_sweep: delta outside [0,1]");
    const Grid g = grid_for(d);
    SweepRow row;
    row.delta = d;
    row.result = eps_grid(d, g, mode);
    row.lower = Rational(2) * d / (Rational(1) + d);
    row.upper = bounds::upper_2delta(d);
    const Rational hi = Rational(1) - d;
    row.lower_applicable = g.contains_x(Rational(0)) && g.contains_x(hi) && g.contains_y(Rational(0)) && g.contains_y(hi);
    rows[k] = std::move(row);
  });
  return rows;
}

// ---------------------------------------------------------------------------
// Independent pairs: alternating search over the marginals.

struct IndependentSearchResult {
  Rational best_value;
  MarginalLaw best_x;
  MarginalLaw best_y;
  Rational seeded_value;  // value reached from the (1-d)·Bernoulli(1-d) start
  Rational conjecture_bound;
  Rational margin;  // bound - best; negative would be a counterexample
  std::size_t restarts_run = 0;
  std::size_t restarts_feasible = 0;
  bool exceeds_bound() const { return margin.sign() < 0; }
};

namespace detail {

/// Tails (E[V; V >= v_k], P(V >= v_k)) at each support value of a marginal.
inline std::vector<std::pair<Rational, Rational>> upper_tails(const MarginalLaw& m) {
  std::vector<std::pair<Rational, Rational>> t(m.atoms.size());
  Rational e, pr;
  for (std::size_t i = m.atoms.size(); i-- > 0;) {
    e += m.atoms[i].first * m.atoms[i].second;
    pr += m.atoms[i].second;
    t[i] = {e, pr};
  }
  return t;
}

inline Rational gap_probability(const MarginalLaw& mx, const MarginalLaw& my, const Rational& delta) {
  Rational v;
  const Rational thr = Rational(1) - delta;
  for (const auto& [x, wx] : mx.atoms)
    for (const auto& [y, wy] : my.atoms)
      if (abs(x - y) >= thr) v += wx * wy;
  return v;
}

/// Best law on `points` for the free coordinate, given the other marginal,
/// under the independent-pair threshold constraints.
inline std::optional<MarginalLaw> best_response(const MarginalLaw& fixed, const std::vector<Rational>& points,
                                                const Rational& delta) {
  const std::size_t n = points.size();
  const Rational p = fixed.mean();
  const Rational thr = Rational(1) - delta;
  LinearProgram lp(n);
  for (std::size_t j = 0; j < n; ++j)
    for (const auto& [x, w] : fixed.atoms)
      if (abs(x - points[j]) >= thr) lp.objective[j] += w;
  lp.add_constraint(std::vector<Rational>(n, Rational(1)), Relation::Equal, Rational(1));
  lp.add_constraint(points, Relation::Equal, p);
  for (const auto& [e_fixed, p_fixed] : upper_tails(fixed))
    for (std::size_t j0 = 0; j0 < n; ++j0) {
      // e_fixed + Σ_{j>=j0} y_j v_j <= p + p_fixed Σ_{j>=j0} v_j
      std::vector<Rational> row(n);
      for (std::size_t j = j0; j < n; ++j) row[j] = points[j] - p_fixed;
      lp.add_constraint(std::move(row), Relation::LessEq, p - e_fixed);
    }
  const auto out = solve_exact(lp);
  if (out.status != LpStatus::Optimal) return std::nullopt;
  std::vector<std::pair<Rational, Rational>> atoms;
  for (std::size_t j = 0; j < n; ++j) atoms.emplace_back(points[j], out.solution[j]);
  return make_marginal(std::move(atoms));
}

/// Alternates best responses until the objective stops increasing.
inline std::optional<std::pair<MarginalLaw, MarginalLaw>> alternate(MarginalLaw mx, const std::vector<Rational>& xs,
                                                                    const std::vector<Rational>& ys,
                                                                    const Rational& delta, int max_rounds = 50) {
  auto my = best_response(mx, ys, delta);
  if (!my) return std::nullopt;
  Rational value = gap_probability(mx, *my, delta);
  for (int round = 0; round < max_rounds; ++round) {
    auto nx = best_response(*my, xs, delta);
    if (!nx) break;
    auto ny = best_response(*nx, ys, delta);
    if (!ny) break;
    const Rational v = gap_probability(*nx, *ny, delta);
    if (v <= value) break;
    value = v;
    mx = std::move(*nx);
    my = std::move(ny);
  }
  return std::make_pair(std::move(mx), std::move(*my));
}

inline std::vector<Rational> merge_points(std::vector<Rational> a, const std::vector<Rational>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

}  // namespace detail

/// Heuristic search for independent coherent pairs maximizing
/// P(|X - Y| >= 1 - delta).  Restart 0 starts from (1-d)·Bernoulli(1-d)
/// marginals; later restarts draw supports of the budgeted sizes from the
/// uniform grid with `resolution` + 1 points.
inline IndependentSearchResult independent_search(const Rational& delta, std::pair<std::size_t, std::size_t> budget,
                                                  std::size_t restarts, std::uint64_t seed, long resolution = 20) {
  if (delta.sign() <= 0 || delta >= Rational(1, 2))
    throw std::invalid_argument("independent_search: delta must lie in (0,1/2)");
  if (budget.first < 1 || budget.second < 1) throw std::invalid_argument("independent_search: empty support budget");
  IndependentSearchResult res;
  res.conjecture_bound = bounds::conj_independent(delta);
  std::mt19937_64 rng(seed);
  auto draw_points = [&](std::size_t count) {
    std::set<long> idx;
    const auto want = std::min<std::size_t>(count, static_cast<std::size_t>(resolution + 1));
    while (idx.size() < want) idx.insert(static_cast<long>(rng() % static_cast<std::uint64_t>(resolution + 1)));
    std::vector<Rational> pts;
    for (long i : idx) pts.emplace_back(i, resolution);
    return pts;
  };
  bool have_best = false;
  auto consider = [&](const MarginalLaw& mx, const MarginalLaw& my) {
    const Rational v = detail::gap_probability(mx, my, delta);
    if (!have_best || v > res.best_value) {
      res.best_value = v;
      res.best_x = mx;
      res.best_y = my;
      have_best = true;
    }
    return v;
  };

  // Seeded start.
  {
    const Rational hi = Rational(1) - delta;
    const std::vector<Rational> pts{Rational(0), hi};
    const auto mx = make_marginal({{Rational(0), delta}, {hi, hi}});
    ++res.restarts_run;
    if (auto pr = detail::alternate(mx, pts, pts, delta)) {
      ++res.restarts_feasible;
      res.seeded_value = consider(pr->first, pr->second);
    }
  }
  for (std::size_t r = 1; r < restarts; ++r) {
    ++res.restarts_run;
    const auto xs = draw_points(budget.first);
    std::vector<std::pair<Rational, Rational>> atoms;
    for (const auto& x : xs) atoms.emplace_back(x, Rational(static_cast<long>(1 + rng() % 9)));
    const auto mx = make_marginal(std::move(atoms));
    // Keep the constant law at the mean available so the first response is feasible.
    auto ys = draw_points(budget.second > 1 ? budget.second - 1 : 0);
    ys = detail::merge_points(ys, {mx.mean()});
    if (auto pr = detail::alternate(mx, detail::merge_points(xs, {}), ys, delta)) {
      ++res.restarts_feasible;
      consider(pr->first, pr->second);
    }
  }
  res.margin = res.conjecture_bound - res.best_value;
  return res;
}

// ---------------------------------------------------------------------------
// Extreme-law probe: does an m x n grid LP with a random objective have an
// optimum that no 2 x 2 sub-grid law attains?

struct ProbeRow {
  Grid grid;
  std::vector<std::vector<Rational>> objective;
  Rational full_value;
  Rational best_2x2_value;
  DiscreteJointLaw full_law;
  bool attained_by_2x2() const { return best_2x2_value == full_value; }
};

struct ProbeReport {
  std::vector<ProbeRow> rows;
  std::size_t infeasible = 0;
  std::size_t not_attained = 0;
};

inline ProbeReport conjecture_probe(std::size_t m, std::size_t n, std::size_t trials, std::uint64_t seed,
                                    long resolution = 12, unsigned threads = 1) {
  if (m < 1 || n < 1) throw std::invalid_argument("conjecture_probe: empty grid size");
  struct Instance {
    Grid grid;
    std::vector<std::vector<Rational>> objective;
  };
  std::mt19937_64 rng(seed);
  std::vector<Instance> instances;
  auto draw = [&](std::size_t count) {
    std::set<long> idx;
    while (idx.size() < count) idx.insert(static_cast<long>(rng() % static_cast<std::uint64_t>(resolution + 1)));
    std::vector<Rational> v;
    for (long i : idx) v.emplace_back(i, resolution);
    return v;
  };
  for (std::size_t t = 0; t < trials; ++t) {
    Instance in;
    in.grid = Grid::make(draw(m), draw(n));
    in.objective.assign(m, std::vector<Rational>(n));
    for (auto& row : in.objective)
      for (auto& v : row) v = Rational(static_cast<long>(rng() % 11) - 5);
    instances.push_back(std::move(in));
  }
  std::vector<std::optional<ProbeRow>> rows(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    const auto& in = instances[t];
    const auto full = optimize_target(in.grid, TargetFunction::custom(in.objective));
    if (!full) return;
    ProbeRow row{in.grid, in.objective, full->value, Rational(0), full->law};
    bool have = false;
    const auto& xs = in.grid.x_values;
    const auto& ys = in.grid.y_values;
    for (std::size_t i0 = 0; i0 < m; ++i0)
      for (std::size_t i1 = std::min(i0 + 1, m - 1); i1 < m; ++i1)
        for (std::size_t j0 = 0; j0 < n; ++j0)
          for (std::size_t j1 = std::min(j0 + 1, n - 1); j1 < n; ++j1) {
            if ((i1 == i0 && m > 1) || (j1 == j0 && n > 1)) continue;
            std::vector<std::size_t> ii{i0}, jj{j0};
            if (i1 != i0) ii.push_back(i1);
            if (j1 != j0) jj.push_back(j1);
            std::vector<Rational> sx, sy;
            for (auto i : ii) sx.push_back(xs[i]);
            for (auto j : jj) sy.push_back(ys[j]);
            std::vector<std::vector<Rational>> sub(ii.size(), std::vector<Rational>(jj.size()));
            for (std::size_t a = 0; a < ii.size(); ++a)
              for (std::size_t b = 0; b < jj.size(); ++b) sub[a][b] = in.objective[ii[a]][jj[b]];
            const auto r = optimize_target(Grid::make(sx, sy), TargetFunction::custom(sub));
            if (r && (!have || r->value > row.best_2x2_value)) {
              row.best_2x2_value = r->value;
              have = true;
            }
          }
    rows[t] = std::move(row);
  });
  ProbeReport rep;
  for (auto& r : rows) {
    if (!r) {
      ++rep.infeasible;
      continue;
    }
    if (!r->attained_by_2x2()) ++rep.not_attained;
    rep.rows.push_back(std::move(*r));
  }
  return rep;
}

}  // namespace coherent
