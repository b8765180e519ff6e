#pragma once

// Test-only oracles.  Nothing here calls the simplex code: vertices are found
// by enumerating column supports and solving the square systems directly.

#include "coherent/coherent.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace coherent::oracle {

using Matrix = std::vector<std::vector<Rational>>;

/// Solves A x = b by Gauss-Jordan elimination when the columns of A are
/// linearly independent and the system is consistent.
inline std::optional<std::vector<Rational>> solve_independent(Matrix a, std::vector<Rational> b) {
  const std::size_t m = a.size();
  const std::size_t n = m ? a[0].size() : 0;
  std::vector<std::size_t> pivot_row(n, m);
  std::size_t row = 0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t r = row;
    while (r < m && a[r][c].is_zero()) ++r;
    if (r == m) return std::nullopt;  // dependent column
    std::swap(a[r], a[row]);
    std::swap(b[r], b[row]);
    const Rational inv = Rational(1) / a[row][c];
    for (auto& v : a[row]) v *= inv;
    b[row] *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == row || a[i][c].is_zero()) continue;
      const Rational f = a[i][c];
      for (std::size_t j = 0; j < n; ++j) a[i][j] -= f * a[row][j];
      b[i] -= f * b[row];
    }
    pivot_row[c] = row++;
  }
  for (std::size_t i = row; i < m; ++i)
    if (!b[i].is_zero()) return std::nullopt;  // inconsistent
  std::vector<Rational> x(n);
  for (std::size_t c = 0; c < n; ++c) x[c] = b[pivot_row[c]];
  return x;
}

/// All vertices of {x >= 0 : A x = b}: points whose support columns are
/// linearly independent.  Exponential in the column count.
inline std::vector<std::vector<Rational>> polytope_vertices(const Matrix& a, const std::vector<Rational>& b) {
  const std::size_t n = a.empty() ? 0 : a[0].size();
  std::vector<std::vector<Rational>> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < n; ++j)
      if (mask >> j & 1U) cols.push_back(j);
    if (cols.size() > a.size()) continue;
    Matrix sub(a.size(), std::vector<Rational>(cols.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t k = 0; k < cols.size(); ++k) sub[i][k] = a[i][cols[k]];
    std::optional<std::vector<Rational>> xs;
    if (cols.empty()) {
      bool zero_rhs = true;
      for (const auto& v : b) zero_rhs = zero_rhs && v.is_zero();
      if (zero_rhs) xs = std::vector<Rational>{};
    } else {
      xs = solve_independent(sub, b);
    }
    if (!xs) continue;
    bool positive = true;
    for (const auto& v : *xs) positive = positive && v.sign() > 0;
    if (!positive) continue;
    std::vector<Rational> x(n);
    for (std::size_t k = 0; k < cols.size(); ++k) x[cols[k]] = (*xs)[k];
    out.push_back(std::move(x));
  }
  return out;
}

/// Brute-force optimum of max c·x, rows (rel) rhs, x >= 0, for small bounded
/// LPs; nullopt when infeasible.  Slacks are appended for inequality rows.
inline std::optional<Rational> brute_force_max(const LinearProgram& lp) {
  const std::size_t n = lp.num_variables();
  std::size_t slacks = 0;
  for (const auto& c : lp.constraints)
    if (c.relation != Relation::Equal) ++slacks;
  Matrix a;
  std::vector<Rational> b;
  std::size_t s = 0;
  for (const auto& c : lp.constraints) {
    std::vector<Rational> row(n + slacks);
    for (std::size_t j = 0; j < n; ++j) row[j] = c.coefficients[j];
    if (c.relation == Relation::LessEq) row[n + s++] = Rational(1);
    if (c.relation == Relation::GreaterEq) row[n + s++] = Rational(-1);
    a.push_back(std::move(row));
    b.push_back(c.rhs);
  }
  std::optional<Rational> best;
  for (const auto& v : polytope_vertices(a, b)) {
    Rational val;
    for (std::size_t j = 0; j < n; ++j) val += lp.objective[j] * v[j];
    if (!best || val > *best) best = val;
  }
  return best;
}

/// Polygon vertices for the corners of r from all basic feasible solutions
/// of the 8-variable corner system, projected to (w21, w22) and hulled.
inline std::vector<Point2> polygon_oracle(const Rect& r) {
  const auto lp = coherent::detail::grid_lp(r.grid(), std::nullopt);
  Matrix a;
  std::vector<Rational> b;
  for (const auto& c : lp.constraints) {
    a.push_back(c.coefficients);
    b.push_back(c.rhs);
  }
  std::vector<Point2> pts;
  for (const auto& v : polytope_vertices(a, b)) pts.emplace_back(v[4] + v[5], v[6] + v[7]);
  return convex_hull(std::move(pts));
}

/// Random rational in [0,1] with denominator dividing `den`.
inline Rational random_unit(std::mt19937_64& rng, long den) {
  return Rational(static_cast<long>(rng() % static_cast<std::uint64_t>(den + 1)), den);
}

/// Coherent by construction: a random finite space with an event A and one
/// random partition per coordinate; X_i is P(A | cell of the i-th partition).
inline DiscreteJointLaw constructed_coherent(std::mt19937_64& rng, std::size_t k, std::size_t omega) {
  std::vector<Rational> w(omega);
  std::vector<bool> in_a(omega);
  for (std::size_t s = 0; s < omega; ++s) {
    w[s] = Rational(1 + static_cast<long>(rng() % 6));
    in_a[s] = rng() % 2 == 1;
  }
  std::vector<std::vector<std::size_t>> cell(k, std::vector<std::size_t>(omega));
  for (auto& c : cell)
    for (auto& v : c) v = rng() % 3;
  std::vector<Atom> atoms;
  for (std::size_t s = 0; s < omega; ++s) {
    Point pt(k);
    for (std::size_t i = 0; i < k; ++i) {
      Rational mass, amass;
      for (std::size_t t = 0; t < omega; ++t)
        if (cell[i][t] == cell[i][s]) {
          mass += w[t];
          if (in_a[t]) amass += w[t];
        }
      pt[i] = amass / mass;
    }
    atoms.push_back({std::move(pt), w[s]});
  }
  return make_law(std::move(atoms));
}

/// Atoms at random lattice points with random weights; mostly incoherent.
inline DiscreteJointLaw random_lattice_law(std::mt19937_64& rng, std::size_t k, std::size_t atoms, long den) {
  std::vector<Atom> out;
  for (std::size_t s = 0; s < atoms; ++s) {
    Point pt(k);
    for (auto& v : pt) v = random_unit(rng, den);
    out.push_back({std::move(pt), Rational(1 + static_cast<long>(rng() % 5))});
  }
  return make_law(std::move(out));
}

}  // namespace coherent::oracle
