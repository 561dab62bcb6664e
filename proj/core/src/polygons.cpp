#include "periodlab/polygons.hpp"

#include "periodlab/error.hpp"

#include <algorithm>
#include <optional>
#include <set>

namespace periodlab {

Polygon::Polygon(std::vector<PolygonVertex> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.empty() || vertices_.front().x != Rational() || vertices_.front().y != Rational())
        throw Error(ErrorCode::invalid_argument, "polygon must start at (0,0)");
    for (std::size_t i = 1; i < vertices_.size(); ++i)
        if (vertices_[i].x <= vertices_[i - 1].x)
            throw Error(ErrorCode::invalid_argument, "polygon vertices must have strictly increasing x");
    const auto slopes = segment_slopes();
    for (std::size_t i = 1; i < slopes.size(); ++i)
        if (slopes[i] < slopes[i - 1]) throw Error(ErrorCode::invalid_argument, "polygon is not convex");
}

std::vector<Rational> Polygon::segment_slopes() const {
    std::vector<Rational> out;
    for (std::size_t i = 1; i < vertices_.size(); ++i)
        out.push_back((vertices_[i].y - vertices_[i - 1].y) / (vertices_[i].x - vertices_[i - 1].x));
    return out;
}

Rational Polygon::value_at(const Rational& x) const {
    if (x < Rational() || x > width()) throw Error(ErrorCode::invalid_argument, "abscissa outside polygon");
    for (std::size_t i = 1; i < vertices_.size(); ++i) {
        const auto& a = vertices_[i - 1];
        const auto& b = vertices_[i];
        if (x <= b.x) return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
    }
    return vertices_.back().y;
}

Polygon polygon_from_slopes(std::vector<Rational> slopes) {
    if (slopes.empty()) throw Error(ErrorCode::invalid_argument, "empty slope multiset");
    std::sort(slopes.begin(), slopes.end());
    std::vector<PolygonVertex> v{{Rational(), Rational()}};
    Rational y;
    for (std::size_t k = 0; k < slopes.size(); ++k) {
        y += slopes[k];
        v.push_back({Rational(static_cast<long>(k + 1)), y});
    }
    return Polygon(std::move(v));
}

Polygon hodge_polygon(const std::vector<FiltrationJump>& filtration_type) {
    std::set<Rational> seen;
    std::vector<Rational> slopes;
    for (const auto& [jump, mult] : filtration_type) {
        if (!seen.insert(jump).second)
            throw Error(ErrorCode::invalid_argument, "repeated filtration jump " + jump.str());
        if (mult == 0) throw Error(ErrorCode::invalid_argument, "filtration multiplicity must be positive");
        slopes.insert(slopes.end(), mult, jump);
    }
    return polygon_from_slopes(std::move(slopes));
}

std::vector<Rational> characteristic_polynomial(const Matrix<Rational>& b) {
    const std::size_t n = b.rows();
    if (b.cols() != n) throw Error(ErrorCode::invalid_argument, "characteristic polynomial needs a square matrix");
    // M_0 = 0, c_n = 1; M_k = b M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(b M_k)/k.
    std::vector<Rational> c(n + 1);
    c[n] = Rational(1);
    Matrix<Rational> m(n, n);
    for (std::size_t k = 1; k <= n; ++k) {
        Matrix<Rational> next = b * m;
        for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
        m = std::move(next);
        const Matrix<Rational> bm = b * m;
        Rational trace;
        for (std::size_t i = 0; i < n; ++i) trace += bm(i, i);
        c[n - k] = -trace / Rational(static_cast<long>(k));
    }
    return c;
}

Polygon newton_polygon_from_charpoly(const Matrix<Rational>& b, unsigned long p) {
    if (!is_prime(p)) throw Error(ErrorCode::invalid_argument, std::to_string(p) + " is not prime");
    const auto c = characteristic_polynomial(b);
    const std::size_t n = b.rows();
    if (n == 0) throw Error(ErrorCode::invalid_argument, "empty matrix");
    if (c[0].is_zero()) throw Error(ErrorCode::singular_matrix, "b is singular");

    // Points (i, v_p(c_{n-i})), skipping zero coefficients.
    std::vector<std::optional<Rational>> pts(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        if (!c[n - i].is_zero()) pts[i] = Rational(p_adic_valuation(c[n - i], p));

    // Lower convex hull from (0, 0) to (n, v(c_0)), walking by minimal slope.
    std::vector<Rational> slopes;
    std::size_t at = 0;
    while (at < n) {
        std::optional<Rational> best;
        std::size_t best_j = at;
        for (std::size_t j = at + 1; j <= n; ++j) {
            if (!pts[j]) continue;
            const Rational s = (*pts[j] - *pts[at]) / Rational(static_cast<long>(j - at));
            // Ties go to the farthest point so each hull edge is taken whole.
            if (!best || s < *best || s == *best) {
                best = s;
                best_j = j;
            }
        }
        slopes.insert(slopes.end(), best_j - at, *best);
        at = best_j;
    }
    return polygon_from_slopes(std::move(slopes));
}

PolygonComparison polygon_compare(const Polygon& upper, const Polygon& lower) {
    if (upper.width() != lower.width())
        throw Error(ErrorCode::invalid_argument, "polygons of different rank cannot be compared");
    PolygonComparison out;
    out.lies_on_or_above = true;
    for (const auto* poly : {&upper, &lower})
        for (const auto& v : poly->vertices())
            if (upper.value_at(v.x) < lower.value_at(v.x)) out.lies_on_or_above = false;
    out.endpoints_equal = upper.terminal() == lower.terminal();
    return out;
}

} // namespace periodlab
