#include "periodlab/error.hpp"
#include "periodlab/periodcoh.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace periodlab;

namespace {

Rational q(long a, long b = 1) { return Rational(a, b); }

Cocharacter cochar(std::initializer_list<long> xs) {
    Cocharacter c;
    for (long x : xs) c.weights.push_back(Rational(x));
    return c;
}

Cocharacter zero(std::size_t n) { return Cocharacter{std::vector<Rational>(n)}; }

const DegreeFunction kDrinfeldRule{1, 1, 0, "test"};

// q-integer products, computed directly
std::uint64_t q_factorial(std::size_t m, std::uint64_t qq) {
    std::uint64_t r = 1;
    for (std::size_t k = 1; k <= m; ++k) {
        std::uint64_t qk = 0, pw = 1;
        for (std::size_t i = 0; i < k; ++i, pw *= qq) qk += pw;
        r *= qk;
    }
    return r;
}

// |GL_n(F_q) / P_I(F_q)| from the block sizes cut out by Delta \ I
std::uint64_t coset_count(std::size_t n, unsigned qq, RootMask I) {
    std::uint64_t r = q_factorial(n, qq);
    std::size_t block = 1;
    for (std::size_t j = 1; j <= n; ++j) {
        if (j < n && (I >> (j - 1) & 1)) {
            ++block;
            continue;
        }
        r /= q_factorial(block, qq);
        block = 1;
    }
    return r;
}

// Moebius inversion over the supersets of I
long moebius_steinberg(std::size_t n, unsigned qq, RootMask I) {
    const RootMask full = (RootMask{1} << (n - 1)) - 1;
    long total = 0;
    for (RootMask J = 0; J <= full; ++J) {
        if ((J & I) != I) continue;
        const long sign = root_count(J & ~I) % 2 ? -1 : 1;
        total += sign * static_cast<long>(coset_count(n, qq, J));
    }
    return total;
}

std::vector<long> degrees(const CohomologyTable& t) {
    std::vector<long> out;
    for (const auto& s : t.summands) out.push_back(s.degree);
    return out;
}

std::vector<RootMask> isets(const CohomologyTable& t) {
    std::vector<RootMask> out;
    for (const auto& s : t.summands) out.push_back(s.i_set);
    return out;
}

} // namespace

TEST(PeriodDatum, Validation) {
    const auto d = PeriodDatum::drinfeld(2);
    EXPECT_EQ(d.mu, cochar({2, -1, -1}));
    EXPECT_EQ(d.nu_b, zero(3));
    EXPECT_EQ(d.galois, GaloisAction::trivial(3));
    EXPECT_NO_THROW(PeriodDatum(2, cochar({1, 0}), Cocharacter{{q(1, 2), q(1, 2)}}, 2));
    EXPECT_THROW(PeriodDatum(2, cochar({1, 0}), Cocharacter{{q(1, 2), q(1, 2)}}, 1), Error);  // not decent
    EXPECT_THROW(PeriodDatum(2, cochar({1, 0}), cochar({1, 0}), 1), Error);                   // not basic
    EXPECT_THROW(PeriodDatum(2, cochar({0, 1}), zero(2), 1), Error);                          // not dominant
    EXPECT_THROW(PeriodDatum(3, cochar({1, 0}), zero(3), 1), Error);
    EXPECT_THROW(PeriodDatum(2, cochar({1, 0}), zero(2), 1, GaloisAction::trivial(3)), Error);
    EXPECT_THROW(PeriodDatum(2, cochar({1, 0}), zero(2), 1, GaloisAction({1, 0})), Error);
}

TEST(FlagDimension, Examples) {
    EXPECT_EQ(flag_dimension(RootDatum(2), cochar({1, -1})), 1u);
    EXPECT_EQ(flag_dimension(RootDatum(3), cochar({2, -1, -1})), 2u);
    EXPECT_EQ(flag_dimension(RootDatum(4), cochar({3, 3, 3, 3})), 0u);
    EXPECT_EQ(flag_dimension(RootDatum(4), cochar({1, 1, 0, 0})), 4u);
    for (std::size_t d = 1; d <= 4; ++d) {
        const auto pd = PeriodDatum::drinfeld(d);
        const auto diag = flag_dimension_diagnostic(pd.rd, pd.mu, pd.nu_b);
        EXPECT_EQ(diag.d, d);
        EXPECT_EQ(diag.two_rho_pairing, Rational());
    }
    EXPECT_EQ(flag_dimension_diagnostic(RootDatum(2), cochar({1, -1}), Cocharacter{{q(1, 2), q(-1, 2)}}).two_rho_pairing,
              q(1));
}

TEST(ISet, Examples) {
    const RootDatum rd(2);
    EXPECT_EQ(i_set(WeylElement::identity(2), cochar({1, -1}), zero(2), rd), 0u);
    EXPECT_EQ(i_set(WeylElement({1, 0}), cochar({1, -1}), zero(2), rd), 1u);
    EXPECT_EQ(i_set(WeylElement::identity(3), cochar({1, 1, 1}), cochar({1, 1, 1}), RootDatum(3)), 3u);
}

TEST(ISet, MatchesPartialSumsAndDominanceProperties) {
    // (x, omega_j) = x_1 + ... + x_j - (j / n) * trace(x)
    for (std::size_t n = 2; n <= 4; ++n) {
        const RootDatum rd(n);
        const RootMask full = (RootMask{1} << (n - 1)) - 1;
        std::vector<Cocharacter> mus = {cochar({1, 0}), cochar({2, -1, -1}), cochar({1, 0, -1}),
                                        cochar({2, 1, 1, -1}), cochar({1, 1, 0, 0}), cochar({3, 1, 0, -2})};
        for (const auto& mu : mus) {
            if (mu.rank() != n) continue;
            bool regular = true;
            for (std::size_t i = 0; i + 1 < n; ++i) regular &= mu.weights[i] != mu.weights[i + 1];
            for (const auto& w : kostant_representatives(rd, mu)) {
                const auto x = w.act(mu).weights;
                Rational trace;
                for (const auto& v : x) trace += v;
                RootMask expected = 0;
                Rational partial;
                for (std::size_t j = 1; j < n; ++j) {
                    partial += x[j - 1];
                    if (partial - Rational(static_cast<long>(j), static_cast<long>(n)) * trace <= Rational())
                        expected |= RootMask{1} << (j - 1);
                }
                const auto got = i_set(w, mu, zero(n), rd);
                EXPECT_EQ(got, expected);
                if (std::is_sorted(x.begin(), x.end())) { EXPECT_EQ(got, full); }
                if (regular && w.length() == 0) { EXPECT_EQ(got, 0u); }
            }
        }
    }
    // Delta without antidominance: w.mu = (-1, 1, 0)
    EXPECT_EQ(i_set(WeylElement({2, 0, 1}), cochar({1, 0, -1}), zero(3), RootDatum(3)), 3u);
}

TEST(Steinberg, Examples) {
    EXPECT_EQ(steinberg_dimension(2, 3, 1), 1u);
    EXPECT_EQ(steinberg_dimension(2, 3, 0), 3u);
    EXPECT_EQ(steinberg_dimension(3, 2, 0), 8u);
    EXPECT_EQ(steinberg_dimension(2, 4, 0), 4u);
    EXPECT_EQ(steinberg_dimension(2, 3, 0, 2), 3u);
    EXPECT_THROW(steinberg_dimension(5, 2, 0), Error);
    EXPECT_THROW(steinberg_dimension(2, 6, 0), Error);
    EXPECT_THROW(steinberg_dimension(2, 3, 2), Error);
}

TEST(Steinberg, AgreesWithMoebiusInversionOfCosetCounts) {
    const std::vector<std::pair<std::size_t, unsigned>> cases = {{2, 2}, {2, 3}, {2, 4}, {2, 5}, {3, 2},
                                                                 {3, 3}, {3, 4}, {4, 2}, {4, 3}};
    for (const auto& [n, qq] : cases) {
        const RootMask full = (RootMask{1} << (n - 1)) - 1;
        for (RootMask I = 0; I <= full; ++I) {
            EXPECT_EQ(FiniteFlagModel::expected_size(n, qq, I), coset_count(n, qq, I));
            EXPECT_EQ(static_cast<long>(steinberg_dimension(n, qq, I)), moebius_steinberg(n, qq, I))
                << "n=" << n << " q=" << qq << " I=" << root_set_str(I);
        }
        std::uint64_t top = 1;
        for (std::size_t i = 0; i < n * (n - 1) / 2; ++i) top *= qq;
        EXPECT_EQ(steinberg_dimension(n, qq, 0), top);
    }
}

TEST(Steinberg, InclusionExclusionSumsToCosetCount) {
    for (const auto& [n, qq] : std::vector<std::pair<std::size_t, unsigned>>{{2, 2}, {2, 3}, {3, 2}, {3, 3}}) {
        const auto model = cached_flag_model(n, qq);
        const RootMask full = model->full_mask();
        for (RootMask I = 0; I <= full; ++I) {
            std::size_t sum = 0;
            for (RootMask J = 0; J <= full; ++J)
                if ((J & I) == I) sum += steinberg_dimension(n, qq, J);
            EXPECT_EQ(sum, model->size(I));
        }
    }
}

TEST(Steinberg, TopDimensionMatchesComplexHomology) {
    for (const auto& [n, qq] : std::vector<std::pair<std::size_t, unsigned>>{{2, 2}, {2, 3}, {3, 2}, {3, 3}}) {
        const auto model = cached_flag_model(n, qq);
        const auto c = assemble_fundamental_complex(*model, StalkSelector::full(*model), 1, 2);
        EXPECT_EQ(homology_dims(c).back(), steinberg_dimension(n, qq, 0, 2));
    }
}

TEST(SteinbergIndex, FirstRoots) {
    EXPECT_EQ(steinberg_index(2, 0), 3u);
    EXPECT_EQ(steinberg_index(2, 1), 1u);
    EXPECT_EQ(steinberg_index(2, 2), 0u);
    EXPECT_EQ(steinberg_index(1, 0), 1u);
}

TEST(CohomologyTable, DrinfeldExamples) {
    const auto t1 = cohomology_table(PeriodDatum::drinfeld(1), kDrinfeldRule);
    EXPECT_EQ(t1.d, 1u);
    EXPECT_EQ(degrees(t1), (std::vector<long>{0, 1}));
    EXPECT_EQ(isets(t1), (std::vector<RootMask>{1, 0}));
    EXPECT_EQ(t1.summands[0].rho_twist, -1);  // degree d - l
    EXPECT_EQ(t1.summands[1].rho_twist, 0);
    EXPECT_EQ(t1.summands[1].overall_twist, 1);
    EXPECT_FALSE(t1.caveats.empty());

    const auto t2 = cohomology_table(PeriodDatum::drinfeld(2), kDrinfeldRule);
    EXPECT_EQ(degrees(t2), (std::vector<long>{0, 1, 2}));
    EXPECT_EQ(isets(t2), (std::vector<RootMask>{3, 1, 0}));
    EXPECT_EQ(t2.summands[1].description, "v*_{P_{a1}} ⊗ ρ*_{[2 1 3]}");
}

TEST(CohomologyTable, CentralMu) {
    const PeriodDatum pd(3, cochar({1, 1, 1}), zero(3), 1);
    const auto t = cohomology_table(pd, kDrinfeldRule);
    ASSERT_EQ(t.summands.size(), 1u);
    EXPECT_EQ(t.d, 0u);
    EXPECT_EQ(t.summands[0].degree, 0);
    EXPECT_EQ(t.summands[0].i_set, 3u);
    EXPECT_EQ(t.summands[0].length, 0u);
}

TEST(CohomologyTable, OneSummandPerOrbitAndOrderInvariant) {
    const auto mu = cochar({1, 1, 0, 0});
    const PeriodDatum split(4, mu, zero(4), 1);
    const PeriodDatum twisted(4, mu, zero(4), 1, GaloisAction({0, 1, 3, 2, 4, 5}));
    const auto a = cohomology_table(split, kDrinfeldRule);
    const auto b = cohomology_table(twisted, kDrinfeldRule);
    EXPECT_EQ(a.summands.size(), 6u);
    EXPECT_EQ(b.summands.size(), galois_orbits(kostant_representatives(twisted.rd, mu), twisted.galois).size());
    ASSERT_EQ(b.summands.size(), 5u);
    std::size_t members = 0;
    for (const auto& s : b.summands) {
        members += s.orbit_size;
        EXPECT_EQ(s.members.size(), s.orbit_size);
        EXPECT_GE(s.degree, 0);
        EXPECT_LE(s.degree, 2 * static_cast<long>(b.d));
    }
    EXPECT_EQ(members, 6u);
    EXPECT_TRUE(std::is_sorted(b.summands.begin(), b.summands.end(),
                               [](const auto& x, const auto& y) { return x.degree < y.degree; }));
    // relabelling the orbit generator does not move any degree
    const PeriodDatum twisted_again(4, mu, zero(4), 1, GaloisAction({0, 1, 3, 2, 4, 5}));
    EXPECT_EQ(degrees(cohomology_table(twisted_again, kDrinfeldRule)), degrees(b));
}

TEST(CohomologyTable, RejectsOutOfRangeDegrees) {
    try {
        cohomology_table(PeriodDatum::drinfeld(1), DegreeFunction{0, 0, -1});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::degree_out_of_range);
        EXPECT_NE(std::string(e.what()).find("orbit"), std::string::npos);
    }
}

TEST(Calibration, DrinfeldRule) {
    const auto rule = calibrate_degree_function(3);
    EXPECT_EQ(rule, kDrinfeldRule);
    EXPECT_EQ(rule.str(), "n = 1*l + 1*d + 0");
    EXPECT_EQ(calibrate_degree_function(4), kDrinfeldRule);
    EXPECT_EQ(calibrate_degree_function(std::vector<PeriodDatum>{PeriodDatum::drinfeld(1), PeriodDatum::drinfeld(2)}),
              kDrinfeldRule);
    EXPECT_THROW(calibrate_degree_function(1), Error);
    EXPECT_THROW(calibrate_degree_function(5), Error);
}

TEST(Calibration, ReproducesSteinbergDegreesForSmallDrinfeld) {
    const auto rule = calibrate_degree_function(3);
    for (std::size_t d = 1; d <= 3; ++d) {
        const auto t = cohomology_table(PeriodDatum::drinfeld(d), rule);
        ASSERT_EQ(t.summands.size(), d + 1);
        for (const auto& s : t.summands) {
            const auto k = static_cast<std::size_t>(s.degree);
            EXPECT_EQ(k, d - s.length);
            EXPECT_EQ(s.i_set, steinberg_index(d, k));
            EXPECT_EQ(s.rho_twist, -static_cast<long>(s.length));
        }
    }
}

TEST(Calibration, AmbiguousAndInconsistentData) {
    try {
        calibrate_degree_function(std::vector<PeriodDatum>{PeriodDatum::drinfeld(1)});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::calibration_ambiguous);
        EXPECT_NE(std::string(e.what()).find("n = 1*l + 1*d + 0"), std::string::npos) << e.what();
        EXPECT_NE(std::string(e.what()).find("n = 1*l + -2*d + 3"), std::string::npos) << e.what();
    }
    try {
        calibrate_degree_function(std::vector<PeriodDatum>{PeriodDatum(2, cochar({0, 0}), zero(2), 1)});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::calibration_ambiguous);
    }
    try {
        calibrate_degree_function(std::vector<PeriodDatum>{PeriodDatum(3, cochar({1, 1, 0}), zero(3), 1)});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::calibration_inconsistent);
    }
    EXPECT_THROW(calibrate_degree_function(std::vector<PeriodDatum>{}), Error);
}

TEST(Duality, Examples) {
    const auto r = duality_report(cohomology_table(PeriodDatum::drinfeld(1), kDrinfeldRule));
    EXPECT_EQ(r.d, 1);
    ASSERT_EQ(r.slots.size(), 2u);
    EXPECT_EQ(r.slots[0].degree, 0);
    EXPECT_EQ(r.slots[0].dual_degree, 2);
    EXPECT_TRUE(r.slots[0].dual_in_compact_range);
    EXPECT_FALSE(r.slots[0].self_paired);
    EXPECT_TRUE(r.slots[1].self_paired);
    EXPECT_TRUE(r.counts_match);
    EXPECT_TRUE(r.compact_range_ok);
    EXPECT_FALSE(r.euler_characteristic.has_value());

    const auto empty = duality_report(CohomologyTable{});
    EXPECT_TRUE(empty.slots.empty());
    EXPECT_TRUE(empty.counts_match);

    const auto with_q = duality_report(cohomology_table(PeriodDatum::drinfeld(1), kDrinfeldRule), 3);
    EXPECT_EQ(with_q.slots[0].steinberg_dims, (std::vector<std::size_t>{1}));
    EXPECT_EQ(with_q.slots[1].steinberg_dims, (std::vector<std::size_t>{3}));
    EXPECT_EQ(with_q.euler_characteristic, std::optional<long>(-2));
}

TEST(Duality, DrinfeldInvolutionLandsInCompactRange) {
    for (std::size_t d = 1; d <= 3; ++d) {
        const auto r = duality_report(cohomology_table(PeriodDatum::drinfeld(d), kDrinfeldRule), d <= 2 ? std::optional<unsigned>(2) : std::nullopt);
        ASSERT_EQ(r.slots.size(), d + 1);
        for (std::size_t k = 0; k <= d; ++k) {
            EXPECT_EQ(r.slots[k].degree, static_cast<long>(k));
            EXPECT_EQ(r.slots[k].dual_degree, static_cast<long>(2 * d - k));
            EXPECT_EQ(r.slots[k].summand_count, 1u);
            EXPECT_EQ(r.slots[k].dual_count, 1u);
        }
        EXPECT_TRUE(r.counts_match);
        EXPECT_TRUE(r.compact_range_ok);
    }
}
