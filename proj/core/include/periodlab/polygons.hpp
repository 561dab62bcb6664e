#pragma once

#include "periodlab/linalg.hpp"
#include "periodlab/rational.hpp"

#include <utility>
#include <vector>

namespace periodlab {

struct PolygonVertex {
    Rational x;
    Rational y;
    friend bool operator==(const PolygonVertex&, const PolygonVertex&) = default;
};

/// Lower convex piecewise-linear function anchored at (0,0). Vertices have
/// strictly increasing x and weakly increasing segment slopes. Polygons built
/// here carry a vertex at every integer abscissa 0..rank, so two polygons are
/// equal as functions iff their vertex lists are equal.
class Polygon {
public:
    /// Validates the invariants; throws Error(invalid_argument) otherwise.
    explicit Polygon(std::vector<PolygonVertex> vertices);

    const std::vector<PolygonVertex>& vertices() const noexcept { return vertices_; }
    const PolygonVertex& terminal() const { return vertices_.back(); }
    Rational width() const { return vertices_.back().x; }

    /// Slope of each segment, left to right.
    std::vector<Rational> segment_slopes() const;

    /// Linear interpolation; x must lie in [0, width].
    Rational value_at(const Rational& x) const;

    friend bool operator==(const Polygon&, const Polygon&) = default;

private:
    std::vector<PolygonVertex> vertices_;
};

/// Sorts the slopes and prefix-sums them: vertex k = (k, sum of k smallest).
Polygon polygon_from_slopes(std::vector<Rational> slopes);

struct FiltrationJump {
    Rational jump;
    std::size_t multiplicity;
    friend bool operator==(const FiltrationJump&, const FiltrationJump&) = default;
};

/// Hodge polygon of a filtration type. Jumps must be distinct and
/// multiplicities positive.
Polygon hodge_polygon(const std::vector<FiltrationJump>& filtration_type);

/// Newton polygon of (Q_p^n, b.sigma) for b with rational entries: the lower
/// convex hull of (i, v_p(c_{n-i})) for the characteristic polynomial
/// sum c_j X^j. Rejects singular b and non-prime p.
Polygon newton_polygon_from_charpoly(const Matrix<Rational>& b, unsigned long p);

/// Coefficients c_0..c_n of det(X - b) (c_n = 1), by Faddeev-LeVerrier.
std::vector<Rational> characteristic_polynomial(const Matrix<Rational>& b);

struct PolygonComparison {
    bool lies_on_or_above = false;
    bool endpoints_equal = false;
    friend bool operator==(const PolygonComparison&, const PolygonComparison&) = default;
};

/// Compares `upper` against `lower` at every vertex abscissa of either.
/// Throws Error(invalid_argument) on a width mismatch.
PolygonComparison polygon_compare(const Polygon& upper, const Polygon& lower);

} // namespace periodlab
