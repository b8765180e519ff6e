#pragma once

// Dense two-phase simplex with Bland's rule, in exact rational arithmetic or
// in double precision followed by exact re-certification of the final basis.
//
// Every outcome carries a certificate that can be checked independently with
// verify_outcome(): dual prices for Optimal, a Farkas vector for Infeasible
// and a feasible point plus improving ray for Unbounded.

#include "coherent/rational.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace coherent {

enum class Relation { LessEq, Equal, GreaterEq };

struct Constraint {
  std::vector<Rational> coefficients;
  Relation relation = Relation::LessEq;
  Rational rhs;
};

/// Per-variable box; an empty optional means unbounded on that side.
struct VariableBound {
  std::optional<Rational> lower = Rational(0);
  std::optional<Rational> upper;
};

/// maximize objective·x subject to constraints and variable bounds.
struct LinearProgram {
  std::vector<Rational> objective;
  std::vector<Constraint> constraints;
  /// Either empty (all variables 0 <= v < inf) or one entry per variable.
  std::vector<VariableBound> bounds;

  LinearProgram() = default;
  explicit LinearProgram(std::size_t num_vars) : objective(num_vars) {}

  std::size_t num_variables() const { return objective.size(); }

  void add_constraint(std::vector<Rational> coefficients, Relation rel, Rational rhs) {
    constraints.push_back({std::move(coefficients), rel, std::move(rhs)});
  }

  VariableBound bound(std::size_t j) const { return bounds.empty() ? VariableBound{} : bounds[j]; }

  void validate() const {
    for (const auto& c : constraints)
      if (c.coefficients.size() != objective.size())
        throw std::invalid_argument("LinearProgram: constraint row length " +
                                    std::to_string(c.coefficients.size()) + " != " +
                                    std::to_string(objective.size()) + " variables");
    if (!bounds.empty() && bounds.size() != objective.size())
      throw std::invalid_argument("LinearProgram: bounds size does not match variables");
    for (const auto& b : bounds)
      if (b.lower && b.upper && *b.upper < *b.lower)
        throw std::invalid_argument("LinearProgram: empty variable box");
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
  }
  return "?";
}

struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  /// Optimal: optimal point. Unbounded: a feasible point.
  std::vector<Rational> solution;
  Rational value;
  /// Dual prices (Optimal) or Farkas multipliers (Infeasible), one per row of
  /// the standard form: the LP's constraints followed by one row per finite
  /// upper bound of a variable that also has a finite lower bound.
  std::vector<Rational> certificate;
  /// Unbounded: improving direction in the original variables.
  std::vector<Rational> ray;
  std::size_t pivots = 0;
  /// True when the final basis came from the double-precision pass.
  bool from_float_basis = false;
};

struct SimplexOptions {
  std::size_t max_pivots = 200000;
};

/// Thrown when the pivot ceiling is hit.
class PivotLimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Standard form: max c·z + constant, rows (rel) b, z >= 0.

struct StandardForm {
  struct Column {
    std::size_t original = 0;
    int sign = 1;  // x_original contribution = sign * z
  };
  std::vector<std::vector<Rational>> rows;
  std::vector<Relation> relations;
  std::vector<Rational> rhs;
  std::vector<Rational> objective;
  Rational objective_constant;
  std::vector<Column> columns;
  std::vector<Rational> shift;  // x = shift + Σ sign*z

  std::size_t num_rows() const { return rows.size(); }
  std::size_t num_cols() const { return columns.size(); }

  std::vector<Rational> to_original(std::span<const Rational> z) const {
    std::vector<Rational> x = shift;
    for (std::size_t c = 0; c < columns.size(); ++c)
      if (!z[c].is_zero()) {
        if (columns[c].sign > 0)
          x[columns[c].original] += z[c];
        else
          x[columns[c].original] -= z[c];
      }
    return x;
  }
  /// Direction mapping (no shift).
  std::vector<Rational> direction_to_original(std::span<const Rational> dz) const {
    std::vector<Rational> d(shift.size());
    for (std::size_t c = 0; c < columns.size(); ++c)
      if (!dz[c].is_zero()) {
        if (columns[c].sign > 0)
          d[columns[c].original] += dz[c];
        else
          d[columns[c].original] -= dz[c];
      }
    return d;
  }
};

inline StandardForm to_standard_form(const LinearProgram& lp) {
  lp.validate();
  const std::size_t n = lp.num_variables();
  StandardForm sf;
  sf.shift.assign(n, Rational(0));
  std::vector<std::pair<std::size_t, Rational>> upper_rows;  // (column, width)
  for (std::size_t j = 0; j < n; ++j) {
    const auto b = lp.bound(j);
    if (b.lower) {
      sf.shift[j] = *b.lower;
      sf.columns.push_back({j, 1});
      if (b.upper) upper_rows.emplace_back(sf.columns.size() - 1, *b.upper - *b.lower);
    } else if (b.upper) {
      sf.shift[j] = *b.upper;
      sf.columns.push_back({j, -1});
    } else {
      sf.columns.push_back({j, 1});
      sf.columns.push_back({j, -1});
    }
  }
  const std::size_t cols = sf.columns.size();
  sf.objective.assign(cols, Rational(0));
  for (std::size_t c = 0; c < cols; ++c) {
    const auto& col = sf.columns[c];
    sf.objective[c] = col.sign > 0 ? lp.objective[col.original] : -lp.objective[col.original];
  }
  for (std::size_t j = 0; j < n; ++j) sf.objective_constant += lp.objective[j] * sf.shift[j];

  for (const auto& con : lp.constraints) {
    std::vector<Rational> row(cols);
    Rational rhs = con.rhs;
    for (std::size_t c = 0; c < cols; ++c) {
      const auto& a = con.coefficients[sf.columns[c].original];
      if (!a.is_zero()) row[c] = sf.columns[c].sign > 0 ? a : -a;
    }
    for (std::size_t j = 0; j < n; ++j)
      if (!sf.shift[j].is_zero() && !con.coefficients[j].is_zero())
        rhs -= con.coefficients[j] * sf.shift[j];
    sf.rows.push_back(std::move(row));
    sf.relations.push_back(con.relation);
    sf.rhs.push_back(std::move(rhs));
  }
  for (const auto& [c, width] : upper_rows) {
    std::vector<Rational> row(cols);
    row[c] = Rational(1);
    sf.rows.push_back(std::move(row));
    sf.relations.push_back(Relation::LessEq);
    sf.rhs.push_back(width);
  }
  return sf;
}

// ---------------------------------------------------------------------------
// Scalar policies for the tableau.

struct ExactScalar {
  using T = mpq_class;
  static bool is_zero(const T& v) { return sgn(v) == 0; }
  static bool is_pos(const T& v) { return sgn(v) > 0; }
  static bool is_neg(const T& v) { return sgn(v) < 0; }
  static T from(const Rational& r) { return r.raw(); }
  static T from_double(double d) { return mpq_class(d); }
};

struct FloatScalar {
  using T = double;
  static constexpr double eps = 1e-9;
  static bool is_zero(double v) { return std::fabs(v) <= eps; }
  static bool is_pos(double v) { return v > eps; }
  static bool is_neg(double v) { return v < -eps; }
  static double from(const Rational& r) { return r.to_double(); }
  static double from_double(double d) { return d; }
};

namespace detail {

/// Tableau over the equality system  A' z + I a = b'  (b' >= 0) where A'
/// holds structural columns then one slack per inequality row, and `a` are
/// artificials (one per row).  Column layout: [structural | slack | artificial | rhs].
template <class S>
class Tableau {
 public:
  using T = typename S::T;

  enum class Result { Optimal, Unbounded };

  Tableau(const StandardForm& sf, std::span<const T> objective, std::size_t max_pivots)
      : m_(sf.num_rows()), n_struct_(sf.num_cols()), max_pivots_(max_pivots) {
    for (auto rel : sf.relations)
      if (rel != Relation::Equal) ++n_slack_;
    n_total_ = n_struct_ + n_slack_ + m_;
    rows_.assign(m_, std::vector<T>(n_total_ + 1, T(0)));
    flipped_.assign(m_, false);
    std::size_t slack = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      auto& row = rows_[i];
      for (std::size_t c = 0; c < n_struct_; ++c)
        if (!sf.rows[i][c].is_zero()) row[c] = S::from(sf.rows[i][c]);
      if (sf.relations[i] != Relation::Equal) {
        row[n_struct_ + slack] = sf.relations[i] == Relation::LessEq ? T(1) : T(-1);
        ++slack;
      }
      row[n_total_] = S::from(sf.rhs[i]);
      if (S::is_neg(row[n_total_])) {
        flipped_[i] = true;
        for (auto& v : row) v = -v;
      }
      row[art(i)] = T(1);
    }
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) basis_[i] = art(i);
    cost_struct_.assign(objective.begin(), objective.end());
    z_.assign(n_total_ + 1, T(0));
  }

  std::size_t rows() const { return m_; }
  std::size_t art(std::size_t i) const { return n_struct_ + n_slack_ + i; }
  bool is_art(std::size_t col) const { return col >= n_struct_ + n_slack_; }
  std::size_t pivots() const { return pivots_; }
  const std::vector<std::size_t>& basis() const { return basis_; }

  /// Phase 1 maximizes -Σ artificials.  Returns the optimal phase-1 value.
  T run_phase1() {
    phase_ = 1;
    rebuild_objective();
    run(/*allow_artificial=*/true);
    return z_[n_total_];
  }

  /// Pivot artificials at zero level out of the basis where possible.
  void drive_out_artificials() {
    for (std::size_t r = 0; r < m_; ++r) {
      if (!is_art(basis_[r])) continue;
      for (std::size_t c = 0; c < n_struct_ + n_slack_; ++c)
        if (!S::is_zero(rows_[r][c])) {
          pivot(r, c);
          break;
        }
    }
  }

  Result run_phase2() {
    phase_ = 2;
    rebuild_objective();
    return run(/*allow_artificial=*/false);
  }

  /// Replace the artificial basis by the given columns (Gauss-Jordan).
  /// Returns false if the columns are not independent.
  bool install_basis(std::span<const std::size_t> cols) {
    for (std::size_t c : cols) {
      std::size_t best = m_;
      for (std::size_t r = 0; r < m_; ++r)
        if (is_art(basis_[r]) && !S::is_zero(rows_[r][c])) {
          if (best == m_ || std::fabs(to_d(rows_[r][c])) > std::fabs(to_d(rows_[best][c])))
            best = r;
        }
      if (best == m_) return false;
      pivot(best, c);
    }
    return true;
  }

  bool primal_feasible() const {
    for (std::size_t r = 0; r < m_; ++r) {
      if (S::is_neg(rows_[r][n_total_])) return false;
      if (is_art(basis_[r]) && !S::is_zero(rows_[r][n_total_])) return false;
    }
    return true;
  }

  /// Values of structural columns at the current basic solution.
  std::vector<T> structural_values() const {
    std::vector<T> z(n_struct_, T(0));
    for (std::size_t r = 0; r < m_; ++r)
      if (basis_[r] < n_struct_) z[basis_[r]] = rows_[r][n_total_];
    return z;
  }

  /// Dual prices for the original (unflipped) rows.
  std::vector<T> duals() const {
    std::vector<T> y(m_);
    const T art_cost = phase_ == 1 ? T(-1) : T(0);
    for (std::size_t i = 0; i < m_; ++i) {
      y[i] = z_[art(i)] + art_cost;
      if (flipped_[i]) y[i] = -y[i];
    }
    return y;
  }

  T objective_value() const { return z_[n_total_]; }

  /// Improving ray for the column that proved unboundedness.
  std::vector<T> unbounded_ray() const {
    std::vector<T> d(n_struct_, T(0));
    if (ray_col_ < n_struct_) d[ray_col_] = T(1);
    for (std::size_t r = 0; r < m_; ++r)
      if (basis_[r] < n_struct_) d[basis_[r]] = -rows_[r][ray_col_];
    return d;
  }

 private:
  static double to_d(const T& v) {
    if constexpr (std::is_same_v<T, double>)
      return v;
    else
      return v.get_d();
  }

  T cost(std::size_t col) const {
    if (phase_ == 1) return is_art(col) ? T(-1) : T(0);
    return col < n_struct_ ? cost_struct_[col] : T(0);
  }

  void rebuild_objective() {
    for (std::size_t c = 0; c <= n_total_; ++c) z_[c] = c < n_total_ ? T(-cost(c)) : T(0);
    for (std::size_t r = 0; r < m_; ++r) {
      const T cb = cost(basis_[r]);
      if (S::is_zero(cb)) continue;
      const auto& row = rows_[r];
      for (std::size_t c = 0; c <= n_total_; ++c)
        if (!S::is_zero(row[c])) z_[c] += cb * row[c];
    }
  }

  Result run(bool allow_artificial) {
    const std::size_t limit = allow_artificial ? n_total_ : n_struct_ + n_slack_;
    while (true) {
      // Bland: lowest-index improving column.
      std::size_t enter = n_total_;
      for (std::size_t c = 0; c < limit; ++c)
        if (S::is_neg(z_[c])) {
          enter = c;
          break;
        }
      if (enter == n_total_) return Result::Optimal;

      std::size_t leave = m_;
      T best_ratio{};
      for (std::size_t r = 0; r < m_; ++r) {
        const T& a = rows_[r][enter];
        if (!S::is_pos(a)) continue;
        T ratio = rows_[r][n_total_] / a;
        if (leave == m_) {
          leave = r;
          best_ratio = std::move(ratio);
          continue;
        }
        const T diff = ratio - best_ratio;
        if (S::is_neg(diff) || (S::is_zero(diff) && basis_[r] < basis_[leave])) {
          leave = r;
          best_ratio = std::move(ratio);
        }
      }
      if (leave == m_) {
        ray_col_ = enter;
        return Result::Unbounded;
      }
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    if (++pivots_ > max_pivots_)
      throw PivotLimitExceeded("simplex: pivot limit " + std::to_string(max_pivots_) +
                               " exceeded");
    auto& prow = rows_[r];
    const T inv = T(1) / prow[c];
    nz_.clear();
    for (std::size_t j = 0; j <= n_total_; ++j) {
      if (S::is_zero(prow[j])) {
        prow[j] = T(0);
        continue;
      }
      prow[j] *= inv;
      nz_.push_back(j);
    }
    prow[c] = T(1);
    auto eliminate = [&](std::vector<T>& row) {
      if (S::is_zero(row[c])) return;
      const T f = row[c];
      for (std::size_t j : nz_) row[j] -= f * prow[j];
      row[c] = T(0);
    };
    for (std::size_t i = 0; i < m_; ++i)
      if (i != r) eliminate(rows_[i]);
    eliminate(z_);
    basis_[r] = c;
  }

  std::size_t m_ = 0, n_struct_ = 0, n_slack_ = 0, n_total_ = 0;
  std::size_t max_pivots_ = 0, pivots_ = 0;
  int phase_ = 1;
  std::size_t ray_col_ = 0;
  std::vector<std::vector<T>> rows_;
  std::vector<T> z_;
  std::vector<T> cost_struct_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> nz_;
  std::vector<bool> flipped_;
};

inline std::vector<Rational> to_rationals(const std::vector<mpq_class>& v) {
  std::vector<Rational> out;
  out.reserve(v.size());
  for (const auto& q : v) out.emplace_back(q);
  return out;
}

inline std::vector<mpq_class> exact_objective(const StandardForm& sf) {
  std::vector<mpq_class> c;
  c.reserve(sf.objective.size());
  for (const auto& r : sf.objective) c.push_back(r.raw());
  return c;
}

/// Runs phase 2 on an exact tableau whose basis is primal feasible and
/// packages the outcome.
inline LpOutcome finish_exact(const LinearProgram& lp, const StandardForm& sf,
                              Tableau<ExactScalar>& tab) {
  LpOutcome out;
  tab.drive_out_artificials();
  const auto res = tab.run_phase2();
  out.pivots = tab.pivots();
  const auto z = to_rationals(tab.structural_values());
  out.solution = sf.to_original(z);
  if (res == Tableau<ExactScalar>::Result::Unbounded) {
    out.status = LpStatus::Unbounded;
    out.ray = sf.direction_to_original(to_rationals(tab.unbounded_ray()));
    out.value = Rational(0);
    for (std::size_t j = 0; j < lp.num_variables(); ++j) out.value += lp.objective[j] * out.solution[j];
    return out;
  }
  out.status = LpStatus::Optimal;
  out.value = Rational(tab.objective_value()) + sf.objective_constant;
  out.certificate = to_rationals(tab.duals());
  return out;
}

}  // namespace detail

/// Exact two-phase simplex.
inline LpOutcome solve_exact(const LinearProgram& lp, const SimplexOptions& opts = {}) {
  const StandardForm sf = to_standard_form(lp);
  const auto c = detail::exact_objective(sf);
  detail::Tableau<ExactScalar> tab(sf, c, opts.max_pivots);
  const mpq_class phase1 = tab.run_phase1();
  if (sgn(phase1) < 0) {
    LpOutcome out;
    out.status = LpStatus::Infeasible;
    out.certificate = detail::to_rationals(tab.duals());
    out.pivots = tab.pivots();
    return out;
  }
  return detail::finish_exact(lp, sf, tab);
}

namespace detail {

/// Double-precision solve; returns the final basis (structural and slack
/// columns only) when it reaches an optimum.
inline std::optional<std::vector<std::size_t>> float_optimal_basis(const StandardForm& sf,
                                                                   std::span<const double> objective,
                                                                   std::size_t max_pivots) {
  try {
    Tableau<FloatScalar> tab(sf, objective, max_pivots);
    if (tab.run_phase1() < -1e-7) return std::nullopt;
    tab.drive_out_artificials();
    if (tab.run_phase2() != Tableau<FloatScalar>::Result::Optimal) return std::nullopt;
    std::vector<std::size_t> cols;
    for (std::size_t b : tab.basis())
      if (!tab.is_art(b)) cols.push_back(b);
    return cols;
  } catch (const PivotLimitExceeded&) {
    return std::nullopt;
  }
}

inline std::vector<double> float_objective(const StandardForm& sf) {
  std::vector<double> c;
  c.reserve(sf.objective.size());
  for (const auto& r : sf.objective) c.push_back(r.to_double());
  return c;
}

}  // namespace detail

/// Locates an optimal basis in double precision, refactorizes it exactly and
/// finishes with exact phase 2 from there (usually zero pivots).  Falls back
/// to solve_exact when the float basis is singular or infeasible in exact
/// arithmetic, or when the float pass does not report an optimum.
inline LpOutcome solve_float_then_certify(const LinearProgram& lp, const SimplexOptions& opts = {}) {
  const StandardForm sf = to_standard_form(lp);
  const auto fc = detail::float_objective(sf);
  if (auto basis = detail::float_optimal_basis(sf, fc, opts.max_pivots)) {
    const auto c = detail::exact_objective(sf);
    detail::Tableau<ExactScalar> tab(sf, c, opts.max_pivots);
    if (tab.install_basis(*basis) && tab.primal_feasible()) {
      auto out = detail::finish_exact(lp, sf, tab);
      out.from_float_basis = true;
      return out;
    }
  }
  return solve_exact(lp, opts);
}

/// Result of optimizing an objective that only exists in floating point over
/// exact rational constraints: the point is exactly feasible, the objective
/// value is approximate.
struct FloatObjectiveOutcome {
  LpStatus status = LpStatus::Infeasible;
  std::vector<Rational> solution;
  double value = 0.0;
  bool basis_certified = false;  // float basis was exactly feasible
};

inline FloatObjectiveOutcome solve_float_objective(const LinearProgram& constraints,
                                                   std::span<const double> objective,
                                                   const SimplexOptions& opts = {}) {
  const StandardForm sf = to_standard_form(constraints);
  std::vector<double> fc(sf.num_cols());
  for (std::size_t c = 0; c < sf.num_cols(); ++c)
    fc[c] = sf.columns[c].sign * objective[sf.columns[c].original];
  FloatObjectiveOutcome out;
  auto eval = [&](const std::vector<Rational>& x) {
    double v = 0;
    for (std::size_t j = 0; j < x.size(); ++j) v += objective[j] * x[j].to_double();
    return v;
  };
  if (auto basis = detail::float_optimal_basis(sf, fc, opts.max_pivots)) {
    const auto zero = std::vector<mpq_class>(sf.num_cols(), mpq_class(0));
    detail::Tableau<ExactScalar> tab(sf, zero, opts.max_pivots);
    if (tab.install_basis(*basis) && tab.primal_feasible()) {
      out.status = LpStatus::Optimal;
      out.solution = sf.to_original(detail::to_rationals(tab.structural_values()));
      out.value = eval(out.solution);
      out.basis_certified = true;
      return out;
    }
  }
  // Exact feasibility decides status; the point is then refined in float only.
  LinearProgram feas = constraints;
  std::fill(feas.objective.begin(), feas.objective.end(), Rational(0));
  const auto f = solve_exact(feas, opts);
  out.status = f.status;
  if (f.status == LpStatus::Optimal) {
    out.solution = f.solution;
    out.value = eval(out.solution);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Certificate verification (exact, independent of the solver path).

struct VerificationReport {
  bool ok = true;
  std::string reason;
};

namespace detail {

inline Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
  Rational s;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].is_zero() && !b[i].is_zero()) s += a[i] * b[i];
  return s;
}

inline bool relation_holds(const Rational& lhs, Relation rel, const Rational& rhs) {
  switch (rel) {
    case Relation::LessEq: return lhs <= rhs;
    case Relation::Equal: return lhs == rhs;
    case Relation::GreaterEq: return lhs >= rhs;
  }
  return false;
}

inline bool multiplier_sign_ok(const Rational& y, Relation rel) {
  if (rel == Relation::LessEq) return y.sign() >= 0;
  if (rel == Relation::GreaterEq) return y.sign() <= 0;
  return true;
}

}  // namespace detail

/// Exact residuals of x against every constraint and bound; true if all hold.
inline bool is_feasible(const LinearProgram& lp, std::span<const Rational> x) {
  if (x.size() != lp.num_variables()) return false;
  for (const auto& c : lp.constraints)
    if (!detail::relation_holds(detail::dot(c.coefficients, x), c.relation, c.rhs)) return false;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const auto b = lp.bound(j);
    if (b.lower && x[j] < *b.lower) return false;
    if (b.upper && x[j] > *b.upper) return false;
  }
  return true;
}

inline VerificationReport verify_outcome(const LinearProgram& lp, const LpOutcome& out) {
  const StandardForm sf = to_standard_form(lp);
  auto fail = [](std::string why) { return VerificationReport{false, std::move(why)}; };
  switch (out.status) {
    case LpStatus::Optimal: {
      if (!is_feasible(lp, out.solution)) return fail("primal infeasible");
      const Rational primal = detail::dot(lp.objective, out.solution);
      if (primal != out.value) return fail("objective value mismatch");
      const auto& y = out.certificate;
      if (y.size() != sf.num_rows()) return fail("dual length mismatch");
      for (std::size_t i = 0; i < y.size(); ++i)
        if (!detail::multiplier_sign_ok(y[i], sf.relations[i])) return fail("dual sign");
      for (std::size_t c = 0; c < sf.num_cols(); ++c) {
        Rational col;
        for (std::size_t i = 0; i < sf.num_rows(); ++i)
          if (!sf.rows[i][c].is_zero()) col += y[i] * sf.rows[i][c];
        if (col < sf.objective[c]) return fail("dual infeasible");
      }
      const Rational dual = detail::dot(y, sf.rhs) + sf.objective_constant;
      if (dual != primal) return fail("duality gap " + (dual - primal).to_string());
      return {};
    }
    case LpStatus::Infeasible: {
      const auto& y = out.certificate;
      if (y.size() != sf.num_rows()) return fail("Farkas length mismatch");
      for (std::size_t i = 0; i < y.size(); ++i)
        if (!detail::multiplier_sign_ok(y[i], sf.relations[i])) return fail("Farkas sign");
      for (std::size_t c = 0; c < sf.num_cols(); ++c) {
        Rational col;
        for (std::size_t i = 0; i < sf.num_rows(); ++i)
          if (!sf.rows[i][c].is_zero()) col += y[i] * sf.rows[i][c];
        if (col.sign() < 0) return fail("Farkas column negative");
      }
      if (detail::dot(y, sf.rhs).sign() >= 0) return fail("Farkas rhs not negative");
      return {};
    }
    case LpStatus::Unbounded: {
      if (!is_feasible(lp, out.solution)) return fail("start point infeasible");
      const auto& d = out.ray;
      if (d.size() != lp.num_variables()) return fail("ray length mismatch");
      for (const auto& c : lp.constraints) {
        const Rational ad = detail::dot(c.coefficients, d);
        if (c.relation == Relation::LessEq && ad.sign() > 0) return fail("ray leaves <= row");
        if (c.relation == Relation::GreaterEq && ad.sign() < 0) return fail("ray leaves >= row");
        if (c.relation == Relation::Equal && !ad.is_zero()) return fail("ray leaves = row");
      }
      for (std::size_t j = 0; j < d.size(); ++j) {
        const auto b = lp.bound(j);
        if (b.lower && d[j].sign() < 0) return fail("ray below lower bound");
        if (b.upper && d[j].sign() > 0) return fail("ray above upper bound");
      }
      if (detail::dot(lp.objective, d).sign() <= 0) return fail("ray not improving");
      return {};
    }
  }
  return fail("unknown status");
}

/// Line-oriented debug dump: "max c1 c2 ...", then "row a1 a2 ... <=|=|>= b",
/// then "bound j lo hi" lines for non-default bounds.
inline void dump_lp(std::ostream& os, const LinearProgram& lp) {
  os << "max";
  for (const auto& c : lp.objective) os << ' ' << c;
  os << '\n';
  for (const auto& con : lp.constraints) {
    os << "row";
    for (const auto& a : con.coefficients) os << ' ' << a;
    os << ' ' << (con.relation == Relation::LessEq ? "<=" : con.relation == Relation::Equal ? "=" : ">=")
       << ' ' << con.rhs << '\n';
  }
  for (std::size_t j = 0; j < lp.bounds.size(); ++j) {
    const auto& b = lp.bounds[j];
    if (b.lower == std::optional<Rational>(Rational(0)) && !b.upper) continue;
    os << "bound " << j << ' ' << (b.lower ? b.lower->to_short_string() : "-inf") << ' '
       << (b.upper ? b.upper->to_short_string() : "inf") << '\n';
  }
}

inline std::string dump_lp(const LinearProgram& lp) {
  std::ostringstream os;
  dump_lp(os, lp);
  return os.str();
}

}  // namespace coherent
