#include "periodlab/error.hpp"
#include "periodlab/polygons.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace periodlab;

namespace {

Rational q(long a, long b = 1) { return Rational(a, b); }

Polygon poly(std::initializer_list<std::pair<Rational, Rational>> pts) {
    std::vector<PolygonVertex> vs;
    for (const auto& [x, y] : pts) vs.push_back({x, y});
    return Polygon(std::move(vs));
}

Matrix<Rational> qmat(std::initializer_list<std::initializer_list<long>> rows) {
    std::vector<Vector<Rational>> rs;
    for (const auto& r : rows) {
        Vector<Rational> v;
        for (long x : r) v.push_back(Rational(x));
        rs.push_back(std::move(v));
    }
    return Matrix<Rational>::from_rows(rs, rs.front().size());
}

void expect_convex(const Polygon& p) {
    const auto s = p.segment_slopes();
    EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
}

} // namespace

TEST(PolygonFromSlopes, Examples) {
    EXPECT_EQ(polygon_from_slopes({q(0), q(0)}), poly({{0, 0}, {1, 0}, {2, 0}}));
    EXPECT_EQ(polygon_from_slopes({q(1, 2), q(1, 2)}), poly({{0, 0}, {1, q(1, 2)}, {2, 1}}));
    EXPECT_EQ(polygon_from_slopes({q(1), q(-1), q(-1)}), poly({{0, 0}, {1, -1}, {2, -2}, {3, -1}}));
    EXPECT_THROW(polygon_from_slopes({}), Error);
}

TEST(PolygonFromSlopes, PermutationInvariantAndConvex) {
    std::mt19937 rng(11);
    for (int it = 0; it < 50; ++it) {
        std::vector<Rational> s;
        for (int i = 0; i < 1 + it % 6; ++i) s.push_back(q(static_cast<long>(rng() % 7) - 3, 1 + rng() % 3));
        const auto p = polygon_from_slopes(s);
        std::shuffle(s.begin(), s.end(), rng);
        EXPECT_EQ(polygon_from_slopes(s), p);
        expect_convex(p);
    }
}

TEST(Polygon, RejectsInvalidVertices) {
    EXPECT_THROW(poly({{1, 0}, {2, 0}}), Error);                 // does not start at the origin
    EXPECT_THROW(poly({{0, 0}, {1, 1}, {2, 0}}), Error);         // concave
    EXPECT_THROW(poly({{0, 0}, {1, 1}, {1, 2}}), Error);         // x not increasing
}

TEST(HodgePolygon, Examples) {
    EXPECT_EQ(hodge_polygon({{q(1), 1}, {q(-1), 1}}), poly({{0, 0}, {1, -1}, {2, 0}}));
    EXPECT_EQ(hodge_polygon({{q(0), 4}}).terminal(), (PolygonVertex{q(4), q(0)}));
    EXPECT_EQ(hodge_polygon({{q(2), 1}, {q(-1), 2}}), poly({{0, 0}, {1, -1}, {2, -2}, {3, 0}}));
    EXPECT_THROW(hodge_polygon({{q(1), 1}, {q(1), 2}}), Error);
    EXPECT_THROW(hodge_polygon({{q(1), 0}}), Error);
}

TEST(HodgePolygon, TerminalIsHodgeDegree) {
    const std::vector<FiltrationJump> t = {{q(3), 2}, {q(1, 2), 2}, {q(-2), 1}};
    EXPECT_EQ(hodge_polygon(t).terminal().y, q(3 * 2 + 1 - 2));
}

TEST(NewtonFromCharpoly, Examples) {
    EXPECT_EQ(newton_polygon_from_charpoly(qmat({{2, 0}, {0, 1}}), 2), poly({{0, 0}, {1, 0}, {2, 1}}));
    EXPECT_EQ(newton_polygon_from_charpoly(qmat({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}), 5),
              polygon_from_slopes({q(0), q(0), q(0)}));
    EXPECT_EQ(newton_polygon_from_charpoly(qmat({{0, 3}, {1, 0}}), 3).segment_slopes(),
              (std::vector<Rational>{q(1, 2), q(1, 2)}));
    EXPECT_THROW(newton_polygon_from_charpoly(qmat({{1, 2}, {2, 4}}), 2), Error);
    EXPECT_THROW(newton_polygon_from_charpoly(qmat({{1, 0}, {0, 1}}), 4), Error);
}

TEST(NewtonFromCharpoly, DiagonalMatchesValuations) {
    // diag(p^a1 u1, ...) has Newton slopes a1, ...
    const auto m = qmat({{4, 0, 0}, {0, 3, 0}, {0, 0, 18}});
    EXPECT_EQ(newton_polygon_from_charpoly(m, 2), polygon_from_slopes({q(2), q(0), q(1)}));
    EXPECT_EQ(newton_polygon_from_charpoly(m, 3), polygon_from_slopes({q(0), q(1), q(2)}));
}

TEST(CharacteristicPolynomial, Companion) {
    // companion of X^3 - 2X + 5
    const auto c = characteristic_polynomial(qmat({{0, 0, -5}, {1, 0, 2}, {0, 1, 0}}));
    EXPECT_EQ(c, (std::vector<Rational>{q(5), q(-2), q(0), q(1)}));
}

TEST(PolygonCompare, Examples) {
    const auto p = poly({{0, 0}, {1, 0}, {2, 1}});
    EXPECT_EQ(polygon_compare(p, p), (PolygonComparison{true, true}));
    const auto flat = poly({{0, 0}, {1, 0}, {2, 0}});
    EXPECT_EQ(polygon_compare(p, flat), (PolygonComparison{true, false}));
    EXPECT_EQ(polygon_compare(flat, p), (PolygonComparison{false, false}));
    const auto newton = newton_polygon_from_charpoly(qmat({{2, 0}, {0, 1}}), 2);
    const auto hodge = hodge_polygon({{q(1), 1}, {q(0), 1}});
    EXPECT_EQ(polygon_compare(newton, hodge), (PolygonComparison{true, true}));
    EXPECT_THROW(polygon_compare(p, poly({{0, 0}, {1, 0}})), Error);
}

TEST(PolygonCompare, ChecksVerticesOfBoth) {
    const auto line = poly({{0, 0}, {1, 0}});
    const auto dip = poly({{0, 0}, {q(1, 2), q(-1, 4)}, {1, q(-1, 4)}});
    EXPECT_EQ(polygon_compare(line, dip), (PolygonComparison{true, false}));
    // the violation sits at x = 1/2, a vertex of the upper candidate only
    const auto bump = poly({{0, 0}, {q(1, 2), q(-1, 4)}, {1, q(-1, 8)}});
    const auto shallow = poly({{0, 0}, {1, q(-1, 8)}});
    EXPECT_FALSE(polygon_compare(bump, shallow).lies_on_or_above);
    EXPECT_TRUE(polygon_compare(shallow, bump).lies_on_or_above);
}
