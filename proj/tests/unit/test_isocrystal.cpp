#include "periodlab/error.hpp"
#include "periodlab/isocrystal.hpp"
#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace periodlab;

namespace {

Rational q(long a, long b = 1) { return Rational(a, b); }

KVector kv(std::initializer_list<const char*> xs, std::size_t nvars = 1) {
    KVector v;
    for (const char* x : xs) v.push_back(ModelFieldElement::parse(x, nvars));
    return v;
}

QVector qv(std::initializer_list<long> xs) {
    QVector v;
    for (long x : xs) v.push_back(Rational(x));
    return v;
}

std::vector<KVector> standard_basis(std::size_t n, std::size_t nvars = 1) {
    std::vector<KVector> out;
    for (std::size_t i = 0; i < n; ++i) {
        KVector v(n, ModelFieldElement(nvars));
        v[i] = ModelFieldElement(nvars, Rational(1));
        out.push_back(std::move(v));
    }
    return out;
}

// slopes, F^top = span(line), F^bottom = V
FilteredIsocrystal line_datum(std::vector<Rational> slopes, KVector line, Rational top, Rational bottom) {
    const std::size_t n = slopes.size();
    return FilteredIsocrystal(Isocrystal(std::move(slopes)), {{top, {std::move(line)}}, {bottom, standard_basis(n)}}, 1);
}

FilteredIsocrystal drinfeld2(const char* a, const char* b) { return drinfeld_datum(kv({a, b})); }

SearchConfig height(unsigned h, unsigned threads = 1) { return {h, threads}; }

std::vector<Rational> jumps_of(const FilteredIsocrystal& fi) {
    std::vector<Rational> out;
    for (const auto& j : fi.filtration_type())
        for (std::size_t i = 0; i < j.multiplicity; ++i) out.push_back(j.jump);
    return out;
}

} // namespace

TEST(Isocrystal, DieudonneManinMultiplicities) {
    EXPECT_NO_THROW(Isocrystal({q(1, 2), q(1, 2)}));
    EXPECT_THROW(Isocrystal({q(1, 2)}), Error);
    EXPECT_THROW(Isocrystal({q(1, 3), q(1, 3)}), Error);
    EXPECT_EQ(Isocrystal({q(1), q(0), q(1)}).newton_degree(), q(2));
}

TEST(FilteredIsocrystal, ValidatesFlag) {
    const Isocrystal iso({q(0), q(0)});
    EXPECT_THROW(FilteredIsocrystal(iso, {{q(1), {kv({"1", "t"})}}}, 1), Error);  // last step not V
    EXPECT_THROW(FilteredIsocrystal(iso, {{q(0), {kv({"1", "t"})}}, {q(1), standard_basis(2)}}, 1), Error);
    EXPECT_THROW(FilteredIsocrystal(iso, {{q(1), {kv({"1", "t"})}}, {q(0), {kv({"1", "0"})}}, {q(-1), standard_basis(2)}},
                                    1),
                 Error);  // second step does not contain the first
    EXPECT_THROW(FilteredIsocrystal(iso, {{q(1), {kv({"1", "t"})}}, {q(0), {kv({"2", "2*t"})}}, {q(-1), standard_basis(2)}},
                                    1),
                 Error);  // not strictly increasing
}

TEST(HNInvariants, Examples) {
    const FilteredIsocrystal trivial(Isocrystal({q(0), q(0), q(0)}), {{q(0), standard_basis(3)}}, 1);
    const auto a = hn_invariants(trivial);
    EXPECT_EQ(a.rank, 3u);
    EXPECT_EQ(a.degree, q(0));
    EXPECT_EQ(a.slope, q(0));

    const auto b = hn_invariants(drinfeld2("1", "t"));
    EXPECT_EQ(b.rank, 2u);
    EXPECT_EQ(b.degree, q(0));

    const auto c = hn_invariants(line_datum({q(1), q(0)}, kv({"1", "t"}), q(1), q(0)));
    EXPECT_EQ(c.degree, q(0));
    EXPECT_EQ(c.slope, q(0));

    const auto d = hn_invariants(line_datum({q(1), q(1)}, kv({"1", "t"}), q(1), q(-2)));
    EXPECT_EQ(d.degree, q(-3));
    EXPECT_EQ(d.slope, q(-3, 2));
}

TEST(InducedSub, Examples) {
    const auto fi = drinfeld2("1", "t");
    EXPECT_EQ(induced_sub(fi, {qv({1, 0}), qv({0, 1})}), fi);

    const auto sub = induced_sub(fi, {qv({1, 0})});
    ASSERT_EQ(sub.filtration_type().size(), 1u);
    EXPECT_EQ(sub.filtration_type()[0].jump, q(-1));

    const auto on_axis = drinfeld2("1", "0");
    EXPECT_EQ(induced_sub(on_axis, {qv({1, 0})}).filtration_type()[0].jump, q(1));
}

TEST(InducedSub, RejectsMixedSlopes) {
    const auto fi = line_datum({q(1), q(0)}, kv({"1", "t"}), q(1), q(0));
    try {
        induced_sub(fi, {qv({1, 1})});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::not_phi_stable);
        EXPECT_NE(std::string(e.what()).find("(1,1)"), std::string::npos) << e.what();
    }
}

TEST(Enumeration, Examples) {
    const auto lines = enumerate_phi_stable_subspaces(Isocrystal({q(0), q(0)}), 1, height(1));
    EXPECT_EQ(lines.size(), 4u);
    EXPECT_EQ(enumerate_phi_stable_subspaces(Isocrystal({q(1), q(0)}), 1, height(1)).size(), 2u);
    const auto zero = enumerate_phi_stable_subspaces(Isocrystal({q(0), q(0)}), 0, height(3));
    ASSERT_EQ(zero.size(), 1u);
    EXPECT_TRUE(zero[0].empty());
    EXPECT_THROW(enumerate_phi_stable_subspaces(Isocrystal({q(1, 2), q(1, 2)}), 1, height(1)), Error);
}

TEST(Enumeration, CountsProjectiveLinesOfBoundedHeight) {
    // primitive (a, b) up to sign with |a|,|b| <= h
    for (unsigned h = 1; h <= 4; ++h) {
        std::size_t expected = 0;
        for (long a = 0; a <= static_cast<long>(h); ++a)
            for (long b = -static_cast<long>(h); b <= static_cast<long>(h); ++b) {
                if (a == 0 && b <= 0) continue;
                if (std::gcd(a, b) == 1) ++expected;
            }
        EXPECT_EQ(enumerate_phi_stable_subspaces(Isocrystal({q(0), q(0)}), 1, height(h)).size(), expected) << h;
    }
}

TEST(Enumeration, ThreadCountDoesNotChangeResults) {
    const Isocrystal iso({q(0), q(0), q(1), q(0)});
    for (std::size_t dim = 0; dim <= 4; ++dim)
        EXPECT_EQ(enumerate_phi_stable_subspaces(iso, dim, height(2, 1)),
                  enumerate_phi_stable_subspaces(iso, dim, height(2, 4)));
    const auto fi = line_datum({q(0), q(0), q(0)}, kv({"1", "t", "t^2+1"}), q(2), q(-1));
    const auto a = subspace_degrees(fi, height(2, 1));
    const auto b = subspace_degrees(fi, height(2, 3));
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].basis, b[i].basis);
        EXPECT_EQ(a[i].degree, b[i].degree);
    }
}

TEST(Admissibility, Examples) {
    const auto ok = is_weakly_admissible(drinfeld2("1", "t"), height(3));
    EXPECT_TRUE(ok.admissible);
    EXPECT_EQ(ok.height_bound, 3u);

    const auto bad = is_weakly_admissible(drinfeld2("1", "2"), height(3));
    EXPECT_FALSE(bad.admissible);
    EXPECT_EQ(bad.reason, Stability::destabilizing_subspace);
    EXPECT_EQ(bad.witness, (std::vector<QVector>{{q(1), q(2)}}));
    EXPECT_EQ(bad.witness_degree, q(1));

    const auto tilt = is_weakly_admissible(line_datum({q(0), q(0)}, kv({"1", "t"}), q(1), q(0)), height(3));
    EXPECT_FALSE(tilt.admissible);
    EXPECT_EQ(tilt.reason, Stability::nonzero_total_degree);
    EXPECT_EQ(tilt.total_degree, q(1));
}

TEST(Admissibility, HeightBoundLimitsTheSearch) {
    // the violating rational line (1, 4) is invisible at height 3
    const auto fi = drinfeld2("1", "4");
    EXPECT_TRUE(is_weakly_admissible(fi, height(3)).admissible);
    EXPECT_FALSE(is_weakly_admissible(fi, height(4)).admissible);
}

TEST(Admissibility, RejectsNonIntegralSlopes) {
    const FilteredIsocrystal fi(Isocrystal({q(1, 2), q(1, 2)}), {{q(1), {kv({"1", "t"})}}, {q(0), standard_basis(2)}}, 1);
    EXPECT_THROW(is_weakly_admissible(fi, height(1)), Error);
}

TEST(DrinfeldMembership, Examples) {
    EXPECT_TRUE(drinfeld_membership(kv({"1", "t"})));
    EXPECT_FALSE(drinfeld_membership(kv({"1", "2"})));
    EXPECT_TRUE(drinfeld_membership(kv({"1", "t", "t^2"})));
    EXPECT_FALSE(drinfeld_membership(kv({"1", "t", "1+t"})));
    EXPECT_TRUE(drinfeld_membership(kv({"t1", "t2", "1"}, 2)));
    EXPECT_FALSE(drinfeld_membership(kv({"1/t", "1/(t+1)", "1/(t^2+t)"})));
    EXPECT_THROW(drinfeld_membership(kv({"0", "0"})), Error);
}

TEST(DrinfeldMembership, AgreesWithAdmissibilityOnSmallPoints) {
    // coefficients in {-1, 0, 1}: any rational relation then has height <= 2
    std::mt19937 rng(21);
    for (int it = 0; it < 40; ++it) {
        KVector v;
        const int n = 2 + it % 2;
        for (int i = 0; i < n; ++i) {
            Polynomial p(1);
            for (int e = 0; e < n; ++e)
                p.add_term({static_cast<std::uint16_t>(e)}, Rational(static_cast<long>(rng() % 3) - 1));
            v.emplace_back(std::move(p));
        }
        if (std::all_of(v.begin(), v.end(), [](const auto& x) { return x.is_zero(); })) continue;
        EXPECT_EQ(drinfeld_membership(v), is_weakly_admissible(drinfeld_datum(v), height(3)).admissible);
    }
}

TEST(HN, Examples) {
    const auto single = hn_filtration(drinfeld2("1", "t"), height(3));
    ASSERT_EQ(single.pieces.size(), 1u);
    EXPECT_EQ(single.pieces[0].slope, q(0));

    const auto two = hn_filtration(drinfeld2("1", "2"), height(2));
    ASSERT_EQ(two.pieces.size(), 2u);
    EXPECT_EQ(two.pieces[0].basis, (std::vector<QVector>{{q(1), q(2)}}));
    EXPECT_EQ(two.pieces[0].slope, q(1));
    EXPECT_EQ(two.pieces[1].slope, q(-1));
    EXPECT_EQ(two.pieces[1].basis.size(), 2u);

    const FilteredIsocrystal axes(Isocrystal({q(1), q(0)}), {{q(0), standard_basis(2)}}, 1);
    const auto rep = hn_filtration(axes, height(2));
    ASSERT_EQ(rep.pieces.size(), 2u);
    EXPECT_EQ(rep.pieces[0].basis, (std::vector<QVector>{qv({0, 1})}));
    EXPECT_EQ(rep.pieces[0].slope, q(0));
    EXPECT_EQ(rep.pieces[1].slope, q(-1));
}

namespace {

using testgen::balanced;

FilteredIsocrystal random_datum(std::mt19937& rng) { return testgen::random_filtered_isocrystal(rng); }

} // namespace

TEST(HN, PropertiesOnRandomData) {
    std::mt19937 rng(8);
    for (int it = 0; it < 40; ++it) {
        const auto fi = random_datum(rng);
        const auto cfg = height(2);
        const auto rep = hn_filtration(fi, cfg);
        Rational total;
        for (std::size_t i = 0; i < rep.pieces.size(); ++i) {
            total += rep.pieces[i].degree;
            if (i) { EXPECT_LT(rep.pieces[i].slope, rep.pieces[i - 1].slope); }
        }
        EXPECT_EQ(total, hn_invariants(fi).degree);
        EXPECT_EQ(rep.pieces.back().basis.size(), fi.rank());
        EXPECT_EQ(rep.pieces.size() == 1, is_semistable(fi, cfg).semistable);

        // first slope is the maximal induced slope
        Rational best = hn_invariants(fi).slope;
        for (const auto& s : subspace_degrees(fi, cfg))
            if (s.rank > 0) best = std::max(best, s.degree / Rational(static_cast<long>(s.rank)));
        EXPECT_EQ(rep.pieces.front().slope, best);
    }
}

TEST(Degree, AdditiveOverSubAndQuotient) {
    std::mt19937 rng(4);
    for (int it = 0; it < 25; ++it) {
        const auto fi = random_datum(rng);
        const Rational total = hn_invariants(fi).degree;
        for (const auto& s : subspace_degrees(fi, height(1))) {
            if (s.rank == 0 || s.rank == fi.rank()) continue;
            const auto sub = induced_sub(fi, s.basis);
            const auto quo = induced_quotient(fi, s.basis);
            EXPECT_EQ(hn_invariants(sub).degree, s.degree);
            EXPECT_EQ(hn_invariants(sub).degree + hn_invariants(quo).degree, total);
            EXPECT_EQ(sub.rank() + quo.rank(), fi.rank());
        }
    }
}

TEST(Polygons, WeaklyAdmissibleImpliesNewtonAboveHodge) {
    std::mt19937 rng(12);
    int admissible = 0;
    for (int it = 0; it < 80; ++it) {
        const auto fi = balanced(random_datum(rng));
        if (!is_weakly_admissible(fi, height(2)).admissible) continue;
        ++admissible;
        EXPECT_EQ(polygon_compare(fi.newton_polygon(), fi.hodge_polygon()), (PolygonComparison{true, true}));
        for (const auto& s : subspace_degrees(fi, height(2))) {
            if (s.rank == 0) continue;
            const auto sub = induced_sub(fi, s.basis);
            EXPECT_TRUE(polygon_compare(sub.newton_polygon(), sub.hodge_polygon()).lies_on_or_above);
        }
    }
    for (const char* c : {"t", "t^2+3", "2*t-1"}) {
        const auto fi = drinfeld2("1", c);
        ASSERT_TRUE(is_weakly_admissible(fi, height(3)).admissible);
        EXPECT_EQ(polygon_compare(fi.newton_polygon(), fi.hodge_polygon()), (PolygonComparison{true, true}));
        ++admissible;
    }
    EXPECT_GT(admissible, 20);
}

TEST(TensorProduct, SlopesAndJumpsAdd) {
    const auto a = line_datum({q(1), q(0)}, kv({"1", "t"}), q(2), q(0));
    const FilteredIsocrystal b(Isocrystal({q(3)}), {{q(-1), standard_basis(1)}}, 1);
    const auto t = tensor_product(a, b);
    EXPECT_EQ(t.iso().slopes(), (std::vector<Rational>{q(4), q(3)}));
    EXPECT_EQ(jumps_of(t), (std::vector<Rational>{q(1), q(-1)}));
    EXPECT_EQ(hn_invariants(t).degree, hn_invariants(a).degree + Rational(2) * hn_invariants(b).degree);
}

namespace {

// Rank 1, or rank 2 with a transcendental line (1, t + c): the only phi-stable
// lines meeting F^{j1} would be rational, so the factor is semistable exactly
// when j1 - j2 >= |a - b| (or a == b).
FilteredIsocrystal totaro_factor(std::mt19937& rng) {
    const long a = static_cast<long>(rng() % 3) - 1;
    if (rng() % 3 == 0) return FilteredIsocrystal(Isocrystal({q(a)}), {{q(static_cast<long>(rng() % 3) - 1), standard_basis(1)}}, 1);
    const long b = static_cast<long>(rng() % 3) - 1;
    const long j2 = static_cast<long>(rng() % 3) - 1;
    const long j1 = j2 + std::max<long>(1, std::abs(a - b)) + static_cast<long>(rng() % 2);
    const std::string c = "t+" + std::to_string(rng() % 4);
    return line_datum({q(a), q(b)}, kv({"1", c.c_str()}), q(j1), q(j2));
}

} // namespace

TEST(TensorProduct, SemistableFactorsGiveSemistableProducts) {
    std::mt19937 rng(30);
    for (int it = 0; it < 12; ++it) {
        const auto x = totaro_factor(rng);
        const auto y = totaro_factor(rng);
        ASSERT_TRUE(is_semistable(x, height(3)).semistable);
        ASSERT_TRUE(is_semistable(y, height(3)).semistable);
        const auto t = tensor_product(x, y);
        const unsigned h = t.rank() >= 4 ? 1 : 2;
        EXPECT_TRUE(is_semistable(t, height(h)).semistable) << "iteration " << it;
    }
}

TEST(SearchConfig, EnvironmentOverride) {
    ::setenv("PERIODLAB_HEIGHT", "5", 1);
    EXPECT_EQ(default_height_bound(), 5u);
    ::unsetenv("PERIODLAB_HEIGHT");
    EXPECT_EQ(default_height_bound(), 3u);
}
