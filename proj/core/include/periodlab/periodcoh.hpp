#pragma once

#include "periodlab/fundcomplex.hpp"
#include "periodlab/rational.hpp"
#include "periodlab/rootdata.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace periodlab {

/// (G, [b], {mu}) for G = GL_n, with b recorded through its slope
/// cocharacter nu_b. The Galois action permutes kostant_representatives(mu).
struct PeriodDatum {
    RootDatum rd;
    Cocharacter mu;
    Cocharacter nu_b;
    long s = 1;
    GaloisAction galois;

    /// Validates ranks, dominance of mu, basicness and decency of nu_b, and
    /// that the action has one entry per Kostant representative.
    PeriodDatum(std::size_t n, Cocharacter mu, Cocharacter nu_b, long s, std::optional<GaloisAction> galois = {});

    /// Drinfeld datum for GL_{d+1}: mu = (d, -1, ..., -1), nu_b = 0, s = 1.
    static PeriodDatum drinfeld(std::size_t d);

    friend bool operator==(const PeriodDatum& a, const PeriodDatum& b) {
        return a.rd.n() == b.rd.n() && a.mu == b.mu && a.nu_b == b.nu_b && a.s == b.s && a.galois == b.galois;
    }
};

/// d = #{positive roots alpha : (alpha, mu) != 0} = dim G/P_mu.
std::size_t flag_dimension(const RootDatum& rd, const Cocharacter& mu);

struct FlagDimensionDiagnostic {
    std::size_t d = 0;            // dim G/P_mu
    Rational two_rho_pairing;     // (2 rho, nu_b), reported alongside
};

FlagDimensionDiagnostic flag_dimension_diagnostic(const RootDatum& rd, const Cocharacter& mu, const Cocharacter& nu_b);

/// {alpha in Delta : (w.mu - nu_b, omega_alpha) <= 0}.
RootMask i_set(const WeylElement& w, const Cocharacter& mu, const Cocharacter& nu_b, const RootDatum& rd);

/// dim_{F_p} LC(X_I) / sum_{I' > I} LC(X_{I'}) for X_I = GL_n(F_q)/P_I(F_q).
/// `p` defaults to the characteristic of q. Capacity limits as for
/// build_finite_flag_model.
std::size_t steinberg_dimension(std::size_t n, unsigned q, RootMask I, std::optional<std::uint32_t> p = {});

/// n_[w] = a * l + b * d + c.
struct DegreeFunction {
    long a = 0;
    long b = 0;
    long c = 0;
    std::string tag = "custom";

    long operator()(long l, long d) const { return a * l + b * d + c; }
    std::string str() const;
    friend bool operator==(const DegreeFunction& x, const DegreeFunction& y) {
        return x.a == y.a && x.b == y.b && x.c == y.c;
    }
};

struct CohomologySummand {
    std::size_t orbit_id = 0;
    std::vector<std::size_t> members;  // indices into kostant_representatives
    RootMask i_set = 0;
    std::size_t length = 0;            // l of the orbit
    std::size_t orbit_size = 0;
    long degree = 0;                   // 2d - n_[w]
    long rho_twist = 0;                // -l
    long overall_twist = 0;            // d
    std::string description;
};

struct CohomologyTable {
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<CohomologySummand> summands;  // sorted by (degree, orbit id)
    /// Side conditions of the decomposition, recorded but not checked.
    std::vector<std::string> caveats;
};

/// One summand per Galois orbit. Error(degree_out_of_range) names the orbit
/// whose degree leaves [0, 2d].
CohomologyTable cohomology_table(const PeriodDatum& pd, const DegreeFunction& degf);

/// Steinberg index of St_k for GL_{d+1}: {alpha_1, ..., alpha_{d-k}}.
RootMask steinberg_index(std::size_t d, std::size_t k);

/// Search bound for the affine coefficients a, b, c.
inline constexpr long kCalibrationRange = 3;

/// Finds the unique rule with |a|, |b|, |c| <= kCalibrationRange such that
/// every orbit of length l of every datum lands in degree d - l and carries
/// the index of St_{d-l}. Error(calibration_ambiguous) lists the candidates,
/// Error(calibration_inconsistent) says why none fits.
DegreeFunction calibrate_degree_function(const std::vector<PeriodDatum>& data);

/// Calibration against the Drinfeld data GL_2 .. GL_{n_max}, n_max in 2..4.
DegreeFunction calibrate_degree_function(std::size_t n_max);

struct DualitySlot {
    long degree = 0;
    long dual_degree = 0;                 // 2d - degree
    std::size_t summand_count = 0;
    std::size_t dual_count = 0;           // summands landing in dual_degree under the involution
    bool self_paired = false;
    bool dual_in_compact_range = false;   // d <= dual_degree <= 2d
    std::vector<RootMask> i_sets;
    std::vector<std::size_t> steinberg_dims;  // filled when q is given
};

struct DualityReport {
    long d = 0;
    std::vector<DualitySlot> slots;       // ascending degree
    bool counts_match = true;
    bool compact_range_ok = true;
    std::optional<long> euler_characteristic;  // sum (-1)^k dim, when q is given
};

DualityReport duality_report(const CohomologyTable& table, std::optional<unsigned> q = {});

} // namespace periodlab
