#include "coherent/coherence.hpp"
#include "coherent/polytope.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace coherent;

namespace {

const Rational zero(0), one(1), half(1, 2);

std::set<Point2> as_set(const std::vector<Point2>& v) { return {v.begin(), v.end()}; }

std::set<DiscreteJointLaw, bool (*)(const DiscreteJointLaw&, const DiscreteJointLaw&)> law_set(
    const std::vector<DiscreteJointLaw>& v) {
  auto less = +[](const DiscreteJointLaw& a, const DiscreteJointLaw& b) {
    return std::lexicographical_compare(a.atoms().begin(), a.atoms().end(), b.atoms().begin(), b.atoms().end(),
                                        [](const Atom& x, const Atom& y) {
                                          return std::tie(x.point, x.weight) < std::tie(y.point, y.weight);
                                        });
  };
  return {v.begin(), v.end(), less};
}

void expect_matches_oracle(const Rect& r) {
  const auto poly = enumerate_vertices(r);
  ASSERT_EQ(poly.status, RectStatus::Nonempty);
  EXPECT_EQ(as_set(poly.coords), as_set(oracle::polygon_oracle(r)));
  EXPECT_GE(poly.vertex_count(), 2u);
  EXPECT_LE(poly.vertex_count(), 8u);
  for (const auto& v : poly.vertices) EXPECT_TRUE(check_coherence(v).coherent());
  EXPECT_TRUE(vertices_are_extreme(r, poly));
}

}  // namespace

TEST(RectFeasibility, Examples) {
  EXPECT_EQ(rect_feasibility(Rect::make(Rational(1, 10), Rational(1, 5), Rational(3, 10), Rational(2, 5))).status,
            RectStatus::Empty);
  const auto d = rect_feasibility(Rect::make(zero, half, half, one));
  EXPECT_EQ(d.status, RectStatus::Degenerate);
  EXPECT_EQ(d.p, half);
  EXPECT_EQ(rect_feasibility(Rect::make(Rational(1, 4), Rational(3, 4), Rational(1, 4), Rational(3, 4))).status,
            RectStatus::Nonempty);
  EXPECT_THROW(Rect::make(half, zero, zero, one), std::invalid_argument);
}

TEST(RectFeasibility, AgreesWithLpOnLattice) {
  // Empty iff the corner LP is infeasible; degenerate iff only X = Y = p fits.
  for (long a = 0; a <= 4; ++a)
    for (long b = a; b <= 4; ++b)
      for (long c = 0; c <= 4; ++c)
        for (long d = c; d <= 4; ++d) {
          const Rect r = Rect::make(Rational(a, 4), Rational(b, 4), Rational(c, 4), Rational(d, 4));
          const auto feas = rect_feasibility(r);
          const auto lp = solve_exact(coherent::detail::grid_lp(r.grid(), std::nullopt));
          EXPECT_EQ(lp.status == LpStatus::Infeasible, feas.status == RectStatus::Empty);
        }
}

TEST(EnumerateVertices, UnitSquare) { expect_matches_oracle(Rect::make(zero, one, zero, one)); }

TEST(EnumerateVertices, DeldisInsideItsSquare) {
  const Rational t(2, 3);
  const Rect r = Rect::make(zero, t, zero, t);
  const auto poly = enumerate_vertices(r);
  EXPECT_TRUE(polygon_contains(r, poly, deldis(Rational(1, 3))));
  expect_matches_oracle(r);
}

TEST(EnumerateVertices, DegenerateAndEmpty) {
  const Rect r = Rect::make(zero, half, half, one);
  const auto poly = enumerate_vertices(r);
  EXPECT_EQ(poly.status, RectStatus::Degenerate);
  ASSERT_TRUE(poly.degenerate_law.has_value());
  const auto& pt = (*poly.degenerate_law)[0].point;
  EXPECT_TRUE((pt[0] == r.x1 || pt[0] == r.x2) && (pt[1] == r.y1 || pt[1] == r.y2));
  EXPECT_EQ(pt[0], pt[1]);
  EXPECT_EQ(enumerate_vertices(Rect::make(zero, Rational(1, 5), half, one)).status, RectStatus::Empty);
}

TEST(EnumerateVertices, RandomRectanglesMatchOracle) {
  for (const auto& r : random_rectangles(60, 3)) expect_matches_oracle(r);
}

TEST(EnumerateVertices, CentralRectangleWithSixVertices) {
  const Rect r = Rect::make(Rational(3, 10), half, Rational(1, 5), Rational(3, 5));
  expect_matches_oracle(r);
  EXPECT_EQ(enumerate_vertices(r).vertex_count(), 6u);
}

TEST(EnumerateVertices, ReflectionConsistency) {
  for (const auto& r : random_rectangles(25, 8)) {
    const auto base = enumerate_vertices(r);
    std::vector<DiscreteJointLaw> swapped, complemented;
    for (const auto& v : base.vertices) {
      swapped.push_back(reflect(v, Reflection::Swap));
      complemented.push_back(reflect(v, Reflection::Complement));
    }
    EXPECT_EQ(law_set(enumerate_vertices(r.swapped()).vertices), law_set(swapped));
    EXPECT_EQ(law_set(enumerate_vertices(r.complemented()).vertices), law_set(complemented));
  }
}

TEST(EnumerateVertices, CoordinatesAreCounterclockwise) {
  const auto poly = enumerate_vertices(Rect::make(Rational(1, 5), Rational(4, 5), Rational(1, 10), Rational(7, 10)));
  const auto& c = poly.coords;
  ASSERT_GE(c.size(), 3u);
  for (std::size_t i = 0; i < c.size(); ++i)
    EXPECT_GT(coherent::detail::cross(c[i], c[(i + 1) % c.size()], c[(i + 2) % c.size()]).sign(), 0);
}

TEST(ConvexHull, DropsInteriorAndCollinear) {
  const std::vector<Point2> pts{{zero, zero}, {one, zero}, {half, zero}, {one, one}, {zero, one}, {half, half}};
  const auto h = convex_hull(pts);
  EXPECT_EQ(h.size(), 4u);
  EXPECT_EQ(h.front(), Point2(zero, zero));
}

TEST(InConvexHull, MembershipLp) {
  const std::vector<std::vector<Rational>> pts{{zero, zero}, {one, zero}, {zero, one}};
  EXPECT_TRUE(in_convex_hull(pts, {Rational(1, 3), Rational(1, 3)}));
  EXPECT_FALSE(in_convex_hull(pts, {one, one}));
}
