#pragma once

#include "periodlab/linalg.hpp"
#include "periodlab/model_field.hpp"
#include "periodlab/polygons.hpp"
#include "periodlab/rational.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <vector>

namespace periodlab {

using QVector = Vector<Rational>;
using KVector = Vector<ModelFieldElement>;

/// An isocrystal in Dieudonne-Manin form: one slope label per basis vector.
/// Every slope r/s (lowest terms) must occur with multiplicity divisible by s.
class Isocrystal {
public:
    explicit Isocrystal(std::vector<Rational> slopes);

    std::size_t rank() const noexcept { return slopes_.size(); }
    const std::vector<Rational>& slopes() const noexcept { return slopes_; }
    bool has_integral_slopes() const;

    /// Basis indices grouped by slope value, ascending in slope.
    std::map<Rational, std::vector<std::size_t>> blocks() const;

    /// v_p(det phi): the sum of all slope labels.
    Rational newton_degree() const;

    Polygon newton_polygon() const { return polygon_from_slopes(slopes_); }

    friend bool operator==(const Isocrystal&, const Isocrystal&) = default;

private:
    std::vector<Rational> slopes_;
};

/// One step F^jump of a decreasing filtration, given by a K-basis.
struct FlagStep {
    Rational jump;
    std::vector<KVector> basis;
};

/// (V, phi, F) with V = K^n. Flag steps are listed with strictly decreasing
/// jumps and strictly increasing subspaces; the last step is all of V.
class FilteredIsocrystal {
public:
    /// Validates every invariant; throws Error(invalid_argument) otherwise.
    /// `nvars` fixes the model field Q(t1..t_nvars).
    FilteredIsocrystal(Isocrystal iso, std::vector<FlagStep> flag, std::size_t nvars);

    const Isocrystal& iso() const noexcept { return iso_; }
    const std::vector<FlagStep>& flag() const noexcept { return flag_; }
    std::size_t rank() const noexcept { return iso_.rank(); }
    std::size_t nvars() const noexcept { return nvars_; }

    /// (jump, dim gr^jump) in flag order.
    std::vector<FiltrationJump> filtration_type() const;
    /// Sum over jumps of jump * dim gr^jump.
    Rational hodge_degree() const;

    Polygon hodge_polygon() const { return periodlab::hodge_polygon(filtration_type()); }
    Polygon newton_polygon() const { return iso_.newton_polygon(); }

    /// Same slopes, same jumps and the same subspaces (compared by echelon form).
    friend bool operator==(const FilteredIsocrystal& a, const FilteredIsocrystal& b);

private:
    Isocrystal iso_;
    std::vector<FlagStep> flag_;
    std::size_t nvars_;
};

struct SearchConfig {
    /// Max |entry| of the integer vectors spanning enumerated subspaces.
    unsigned height_bound = 3;
    /// Worker threads for enumeration and degree evaluation. Results are
    /// identical for every thread count.
    unsigned threads = 1;
};

/// Height bound from PERIODLAB_HEIGHT, else 3.
unsigned default_height_bound();

struct HNInvariants {
    std::size_t rank = 0;
    Rational degree;
    Rational slope;
};

/// deg = sum i dim gr^i - v(det phi), slope = deg / rank.
HNInvariants hn_invariants(const FilteredIsocrystal& fi);

/// Restriction to a phi-stable Q-subspace W with the induced filtration
/// F cap (W tensor K). The returned object uses a block-adapted basis of W
/// ordered by leading coordinate. Throws Error(not_phi_stable) naming a basis
/// vector whose slope components leave W.
FilteredIsocrystal induced_sub(const FilteredIsocrystal& fi, const std::vector<QVector>& w_basis);

/// V/W with the image filtration, in the basis of a block-adapted complement.
FilteredIsocrystal induced_quotient(const FilteredIsocrystal& fi, const std::vector<QVector>& w_basis);

/// Tensor product: slope labels added pairwise, F^x = sum_{a+b=x} F^a (x) F^b.
/// Basis order is lexicographic in (i, j).
FilteredIsocrystal tensor_product(const FilteredIsocrystal& a, const FilteredIsocrystal& b);

/// Standard Drinfeld datum for a point of P^{n-1}: slopes 0^n and the
/// filtration F^{n-1} = the line through `coords`, F^{-1} = V.
FilteredIsocrystal drinfeld_datum(const KVector& coords);

/// All phi-stable subspaces of the given dimension that are direct sums over
/// slope blocks of Q-spans of integer vectors with entries bounded by the
/// height bound. Returned as reduced echelon bases in lexicographic order.
/// Requires integral slopes (Error(unsupported) otherwise); Error(capacity)
/// when the candidate count is too large.
std::vector<std::vector<QVector>> enumerate_phi_stable_subspaces(const Isocrystal& iso, std::size_t dim,
                                                                 const SearchConfig& cfg);

/// A phi-stable subspace together with its induced rank and degree.
struct SubspaceDegree {
    std::vector<QVector> basis;  // reduced echelon form
    std::size_t rank = 0;
    Rational degree;
};

/// Induced degrees of every enumerated subspace of dimensions 0..n, ordered by
/// (dimension, echelon basis).
std::vector<SubspaceDegree> subspace_degrees(const FilteredIsocrystal& fi, const SearchConfig& cfg);

/// Degree of fi restricted to one phi-stable subspace (any basis).
Rational induced_degree(const FilteredIsocrystal& fi, const std::vector<QVector>& w_basis);

enum class Stability { holds, nonzero_total_degree, destabilizing_subspace };

struct AdmissibilityVerdict {
    bool admissible = false;
    Stability reason = Stability::holds;
    std::vector<QVector> witness;  // empty unless reason == destabilizing_subspace
    Rational witness_degree;
    Rational total_degree;
    unsigned height_bound = 0;
};

/// Weakly admissible = total degree 0 and every enumerated proper nonzero
/// phi-stable subspace has induced degree <= 0. A violation reports the
/// subspace of maximal degree.
AdmissibilityVerdict is_weakly_admissible(const FilteredIsocrystal& fi, const SearchConfig& cfg);

struct SemistabilityVerdict {
    bool semistable = false;
    std::vector<QVector> witness;
    Rational witness_slope;
    Rational slope;
    unsigned height_bound = 0;
};

/// Every enumerated proper nonzero subspace has slope <= slope(V).
SemistabilityVerdict is_semistable(const FilteredIsocrystal& fi, const SearchConfig& cfg);

struct HNPiece {
    std::vector<QVector> basis;  // cumulative subspace, echelon form
    std::size_t rank = 0;        // rank of the graded piece
    Rational degree;             // degree of the graded piece
    Rational slope;
};

struct HNReport {
    std::vector<HNPiece> pieces;
    unsigned height_bound = 0;
};

/// Greedy Harder-Narasimhan filtration over the enumerated subspaces: each
/// step maximises the quotient slope, then the rank, then takes the
/// lexicographically smallest echelon basis.
HNReport hn_filtration(const FilteredIsocrystal& fi, const SearchConfig& cfg);

/// True iff the coordinates are Q-linearly independent, i.e. the point lies
/// on no Q-rational hyperplane. Throws Error(invalid_argument) on the zero
/// vector.
bool drinfeld_membership(const KVector& coords);

} // namespace periodlab
