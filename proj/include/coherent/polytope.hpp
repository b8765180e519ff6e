#pragma once

// Extreme coherent laws on the four corners of a rectangle.  The coherent
// laws on the corners form a polygon in a 2-dimensional affine subspace; its
// vertices are found by gift wrapping with an LP support oracle.
//
// Affine coordinates: (P(x2,y1), P(x2,y2)).  Given x1 < x2 and y1 < y2 the
// total-mass and equal-means constraints determine the other two corner
// probabilities from these.

#include "coherent/coherence.hpp"
#include "coherent/extremal.hpp"
#include "coherent/law.hpp"
#include "coherent/lp.hpp"
#include "coherent/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace coherent {

struct Rect {
  Rational x1, x2, y1, y2;

  static Rect make(Rational x1, Rational x2, Rational y1, Rational y2) {
    Rect r{std::move(x1), std::move(x2), std::move(y1), std::move(y2)};
    for (const auto* v : {&r.x1, &r.x2, &r.y1, &r.y2})
      if (v->sign() < 0 || *v > Rational(1)) throw std::invalid_argument("rect: coordinate outside [0,1]");
    if (r.x2 < r.x1 || r.y2 < r.y1) throw std::invalid_argument("rect: need x1 <= x2 and y1 <= y2");
    return r;
  }

  bool non_degenerate() const { return x1 < x2 && y1 < y2; }
  Grid grid() const { return Grid::make({x1, x2}, {y1, y2}); }
  Rect swapped() const { return {y1, y2, x1, x2}; }
  Rect complemented() const {
    const Rational one(1);
    return {one - x2, one - x1, one - y2, one - y1};
  }
};

enum class RectStatus { Empty, Degenerate, Nonempty };

inline const char* to_string(RectStatus s) {
  switch (s) {
    case RectStatus::Empty: return "Empty";
    case RectStatus::Degenerate: return "Degenerate";
    case RectStatus::Nonempty: return "Nonempty";
  }
  return "?";
}

struct RectFeasibility {
  RectStatus status = RectStatus::Empty;
  Rational p;  // Degenerate: the forced common value
};

/// Diagonal criterion: compare x1 ∨ y1 with x2 ∧ y2.
inline RectFeasibility rect_feasibility(const Rect& r) {
  const Rational lo = max(r.x1, r.y1);
  const Rational hi = min(r.x2, r.y2);
  if (lo > hi) return {RectStatus::Empty, {}};
  if (lo == hi) return {RectStatus::Degenerate, lo};
  return {RectStatus::Nonempty, {}};
}

using Point2 = std::pair<Rational, Rational>;

struct PolygonResult {
  RectStatus status = RectStatus::Empty;
  std::optional<DiscreteJointLaw> degenerate_law;
  std::vector<DiscreteJointLaw> vertices;  // counterclockwise in `coords`
  std::vector<Point2> coords;
  std::size_t oracle_calls = 0;

  std::size_t vertex_count() const { return vertices.size(); }
};

namespace detail {

inline Rational cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
}

}  // namespace detail

/// Strict convex hull (no collinear points), counterclockwise, starting from
/// the lexicographically smallest point.
inline std::vector<Point2> convex_hull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 2) return pts;
  std::vector<Point2> h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && detail::cross(h[k - 2], h[k - 1], p).sign() <= 0) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && detail::cross(h[k - 2], h[k - 1], pts[i]).sign() <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

/// Exact LP membership test: is `target` a convex combination of `points`?
inline bool in_convex_hull(const std::vector<std::vector<Rational>>& points, const std::vector<Rational>& target) {
  if (points.empty()) return false;
  const std::size_t n = points.size(), d = target.size();
  LinearProgram lp(n);
  lp.add_constraint(std::vector<Rational>(n, Rational(1)), Relation::Equal, Rational(1));
  for (std::size_t c = 0; c < d; ++c) {
    std::vector<Rational> row(n);
    for (std::size_t i = 0; i < n; ++i) row[i] = points[i].at(c);
    lp.add_constraint(std::move(row), Relation::Equal, target[c]);
  }
  return solve_exact(lp).status == LpStatus::Optimal;
}

/// Corner probabilities (w11, w12, w21, w22) of a law on the rectangle.
inline std::vector<Rational> corner_probabilities(const Rect& r, const DiscreteJointLaw& law) {
  std::vector<Rational> w(4);
  for (const auto& a : law.atoms()) {
    const std::size_t i = a.point[0] == r.x1 ? 0 : (a.point[0] == r.x2 ? 1 : 2);
    const std::size_t j = a.point[1] == r.y1 ? 0 : (a.point[1] == r.y2 ? 1 : 2);
    if (i > 1 || j > 1) throw std::invalid_argument("corner_probabilities: atom off the corners");
    w[2 * i + j] += a.weight;
  }
  return w;
}

inline Point2 affine_coordinates(const Rect& r, const DiscreteJointLaw& law) {
  const auto w = corner_probabilities(r, law);
  return {w[2], w[3]};
}

namespace detail {

class CornerOracle {
 public:
  explicit CornerOracle(const Rect& r) : rect_(r), grid_(r.grid()), base_(grid_lp(grid_, std::nullopt)) {}

  /// Lexicographic maximum of primary·z, then secondary·z, over the polygon.
  std::optional<std::pair<Point2, DiscreteJointLaw>> support(const Point2& primary, const Point2& secondary) {
    ++calls_;
    LinearProgram lp = base_;
    set_objective(lp, primary);
    auto first = solve_exact(lp);
    if (first.status != LpStatus::Optimal) return std::nullopt;
    lp.add_constraint(lp.objective, Relation::Equal, first.value);
    set_objective(lp, secondary);
    auto second = solve_exact(lp);
    if (second.status != LpStatus::Optimal) throw InvariantViolation("polygon: lexicographic stage infeasible");
    auto res = package(grid_, second.solution, std::nullopt);
    auto z = affine_coordinates(rect_, res.law);
    return std::make_pair(std::move(z), std::move(res.law));
  }

  std::size_t calls() const { return calls_; }

 private:
  // z = (w21, w22) where w_ij = a_ij + b_ij; cells (1,0) and (1,1) of the 2x2 grid.
  void set_objective(LinearProgram& lp, const Point2& d) const {
    std::fill(lp.objective.begin(), lp.objective.end(), Rational(0));
    const std::size_t c10 = 2 * (1 * 2 + 0), c11 = 2 * (1 * 2 + 1);
    lp.objective[c10] = d.first;
    lp.objective[c10 + 1] = d.first;
    lp.objective[c11] = d.second;
    lp.objective[c11 + 1] = d.second;
  }

  Rect rect_;
  Grid grid_;
  LinearProgram base_;
  std::size_t calls_ = 0;
};

}  // namespace detail

/// Vertices of the polygon of coherent laws on the corners of R.
inline PolygonResult enumerate_vertices(const Rect& r) {
  PolygonResult out;
  const auto feas = rect_feasibility(r);
  out.status = feas.status;
  if (feas.status == RectStatus::Empty) return out;
  if (feas.status == RectStatus::Degenerate) {
    out.degenerate_law = make_law({{{feas.p, feas.p}, Rational(1)}});
    return out;
  }
  if (!r.non_degenerate()) throw std::invalid_argument("enumerate_vertices: rectangle must have x1 < x2 and y1 < y2");

  detail::CornerOracle oracle(r);
  std::map<Point2, DiscreteJointLaw> laws;
  const Rational one(1), zero(0);
  const std::pair<Point2, Point2> seeds[] = {
      {{one, zero}, {zero, one}}, {{-one, zero}, {zero, -one}}, {{zero, one}, {-one, zero}}, {{zero, -one}, {one, zero}}};
  std::vector<Point2> pts;
  for (const auto& [d, e] : seeds) {
    auto s = oracle.support(d, e);
    if (!s) throw InvariantViolation("polygon: nonempty rectangle with infeasible corner LP");
    pts.push_back(s->first);
    laws.emplace(s->first, s->second);
  }
  std::vector<Point2> hull = convex_hull(pts);

  if (hull.size() >= 2) {
    std::size_t i = 0;
    while (i < hull.size()) {
      const Point2& p = hull[i];
      const Point2& q = hull[(i + 1) % hull.size()];
      const Point2 normal{q.second - p.second, p.first - q.first};
      const Point2 along{q.first - p.first, q.second - p.second};
      auto s = oracle.support(normal, along);
      const Rational edge_level = normal.first * p.first + normal.second * p.second;
      const Rational found = normal.first * s->first.first + normal.second * s->first.second;
      if (found > edge_level) {
        laws.emplace(s->first, s->second);
        hull.insert(hull.begin() + static_cast<std::ptrdiff_t>(i + 1), s->first);
      } else {
        ++i;
      }
    }
  }
  out.oracle_calls = oracle.calls();
  out.coords = hull;
  for (const auto& z : hull) out.vertices.push_back(laws.at(z));
  return out;
}

/// No vertex lies in the convex hull of the others.
inline bool vertices_are_extreme(const Rect& r, const PolygonResult& poly) {
  for (std::size_t i = 0; i < poly.vertices.size(); ++i) {
    std::vector<std::vector<Rational>> others;
    for (std::size_t j = 0; j < poly.vertices.size(); ++j)
      if (j != i) others.push_back(corner_probabilities(r, poly.vertices[j]));
    if (in_convex_hull(others, corner_probabilities(r, poly.vertices[i]))) return false;
  }
  return true;
}

/// Is the law (supported on the corners of r) inside the polygon?
inline bool polygon_contains(const Rect& r, const PolygonResult& poly, const DiscreteJointLaw& law) {
  std::vector<std::vector<Rational>> pts;
  for (const auto& v : poly.vertices) pts.push_back(corner_probabilities(r, v));
  return in_convex_hull(pts, corner_probabilities(r, law));
}

/// Random rectangles with corners on the 1/resolution lattice, redrawn until
/// the rectangle is nonempty with x1 < x2 and y1 < y2.
inline std::vector<Rect> random_rectangles(std::size_t count, std::uint64_t seed, long resolution = 20) {
  std::mt19937_64 rng(seed);
  auto draw = [&] { return static_cast<long>(rng() % static_cast<std::uint64_t>(resolution + 1)); };
  std::vector<Rect> out;
  while (out.size() < count) {
    long a = draw(), b = draw(), c = draw(), d = draw();
    if (a == b || c == d) continue;
    if (a > b) std::swap(a, b);
    if (c > d) std::swap(c, d);
    Rect r{Rational(a, resolution), Rational(b, resolution), Rational(c, resolution), Rational(d, resolution)};
    if (rect_feasibility(r).status != RectStatus::Nonempty) continue;
    out.push_back(std::move(r));
  }
  return out;
}

/// Rectangles [c - h, c + h] x [c' - h', c' + h'] around the center of the square.
inline std::vector<Rect> central_rectangles() {
  std::vector<Rect> out;
  const long den = 20;
  for (long cx = 8; cx <= 12; ++cx)
    for (long cy = 8; cy <= 12; ++cy)
      for (long hx = 2; hx <= 8; hx += 2)
        for (long hy = 2; hy <= 8; hy += 2) {
          Rect r{Rational(cx - hx, den), Rational(cx + hx, den), Rational(cy - hy, den), Rational(cy + hy, den)};
          if (r.x1.sign() < 0 || r.y1.sign() < 0 || r.x2 > Rational(1) || r.y2 > Rational(1)) continue;
          if (rect_feasibility(r).status == RectStatus::Nonempty) out.push_back(std::move(r));
        }
  return out;
}

}  // namespace coherent
