#pragma once

#include "periodlab/finite_field.hpp"
#include "periodlab/linalg.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace periodlab {

/// Subset I of the simple roots Delta = {alpha_1 < ... < alpha_{n-1}};
/// bit i stands for alpha_{i+1}.
using RootMask = std::uint32_t;

std::size_t root_count(RootMask mask);
/// "{}" or "{a1,a3}".
std::string root_set_str(RootMask mask);

/// X_I = GL_n(F_q)/P_I(F_q) for every I, realised as partial flags of F_q^n
/// with a subspace of dimension j for each alpha_j not in I. Points of X_I
/// are sorted by their subspace ids, so the model is deterministic.
class FiniteFlagModel {
public:
    std::size_t n() const noexcept { return n_; }
    unsigned q() const noexcept { return q_; }
    std::size_t simple_root_count() const noexcept { return n_ - 1; }
    RootMask full_mask() const noexcept { return (RootMask{1} << (n_ - 1)) - 1; }

    std::size_t size(RootMask I) const { return points_.at(I).size(); }
    /// Subspace ids (one per cut dimension, ascending) of point `idx` of X_I.
    const std::vector<std::uint32_t>& point(RootMask I, std::size_t idx) const { return points_.at(I).at(idx); }
    /// Canonical label: the reduced echelon bases of the flag's subspaces.
    std::string label(RootMask I, std::size_t idx) const;

    /// p_{I,I'} : X_I -> X_{I'} for I subset I' (any, not only adjacent).
    const std::vector<std::uint32_t>& projection(RootMask I, RootMask I_prime) const;

    /// Gaussian multinomial |GL_n(F_q)| / |P_I(F_q)|.
    static std::uint64_t expected_size(std::size_t n, unsigned q, RootMask I);

private:
    friend FiniteFlagModel build_finite_flag_model(std::size_t n, unsigned q);
    std::size_t n_ = 0;
    unsigned q_ = 0;
    // subspaces_[k][id] = flattened k x n echelon basis over F_q
    std::vector<std::vector<std::vector<std::uint8_t>>> subspaces_;
    std::vector<std::vector<std::vector<std::uint32_t>>> points_;
    std::map<std::pair<RootMask, RootMask>, std::vector<std::uint32_t>> projections_;
};

/// Largest |X_empty| a model may have.
inline constexpr std::uint64_t kMaxFlagModelPoints = 20000;

/// n in 2..4, q a prime power <= 9 and |X_empty| <= kMaxFlagModelPoints;
/// otherwise Error(capacity) / Error(invalid_argument). Checks the coset
/// counts, surjectivity of the projections and the commuting squares.
FiniteFlagModel build_finite_flag_model(std::size_t n, unsigned q);

/// Shared, lazily built model (thread-safe).
std::shared_ptr<const FiniteFlagModel> cached_flag_model(std::size_t n, unsigned q);

/// A nonempty subset X_I(x) of each X_I, closed under the projections.
class StalkSelector {
public:
    /// Validates against the model; Error(invalid_selector) names the
    /// offending pair (I, I') or level.
    StalkSelector(const FiniteFlagModel& m, std::vector<std::vector<std::uint32_t>> subsets);

    static StalkSelector full(const FiniteFlagModel& m);
    /// Images of one full flag x in X_empty under all projections.
    static StalkSelector singleton(const FiniteFlagModel& m, std::size_t flag_index);
    /// Given points of X_empty together with all of their images.
    static StalkSelector generated_by(const FiniteFlagModel& m, const std::vector<std::uint32_t>& flags);

    const std::vector<std::uint32_t>& subset(RootMask I) const { return subsets_.at(I); }

private:
    std::vector<std::vector<std::uint32_t>> subsets_;
};

/// Cochain complex C^0 -> C^1 -> ... over F_p; D_k : C^k -> C^{k+1} is a
/// dims[k+1] x dims[k] matrix.
class ChainComplex {
public:
    ChainComplex(std::vector<std::size_t> dims, std::vector<SparseFpMatrix> differentials, std::uint32_t p);

    const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    const std::vector<SparseFpMatrix>& differentials() const noexcept { return diffs_; }
    std::uint32_t modulus() const noexcept { return p_; }

    /// D_{k+1} D_k == 0 for every k.
    bool squares_to_zero() const;
    long euler_characteristic() const;

private:
    std::vector<std::size_t> dims_;
    std::vector<SparseFpMatrix> diffs_;
    std::uint32_t p_;
};

/// 0 -> F_p^c -> (+)_{|Delta\I|=1} LC(X_I(x)) -> ... -> LC(X_empty(x)) -> 0,
/// with d_{I,I'} = (-1)^i p_{I,I'}^* where alpha_i is the dropped root and i
/// its 1-based position inside I'. Degree k collects the I with |Delta\I| = k,
/// ordered by ascending mask. `p` must be prime. Throws if D^2 != 0.
ChainComplex assemble_fundamental_complex(const FiniteFlagModel& m, const StalkSelector& sel, std::size_t coeff_dim,
                                          std::uint32_t p);

/// dim ker D_k / im D_{k-1} for each degree.
std::vector<std::size_t> homology_dims(const ChainComplex& c);

/// |X_I(x)| * coeff_dim: the dimension of LC(X_I(x), F_p^coeff_dim).
std::size_t stalk_dimension(const FiniteFlagModel& m, const StalkSelector& sel, RootMask I,
                            std::size_t coeff_dim = 1);

/// E_1^{p,0} = sum over |Delta\I| = p+1 of |X_I(x)|, p = 0..|Delta|-1.
std::vector<std::size_t> e1_page(const FiniteFlagModel& m, const StalkSelector& sel);

using FinitePart = std::vector<int>;

/// Extends a disjoint cover of F subset X to a disjoint cover of X: part k
/// meets F exactly in the k-th input part, and X \ F is absorbed into the
/// first part. With F empty the result is {X}. Error(invalid_cover) if the
/// cover has empty or overlapping parts, does not cover F, or F is not in X.
std::vector<FinitePart> extend_disjoint_cover(const FinitePart& X, const FinitePart& F,
                                              const std::vector<FinitePart>& cover);

} // namespace periodlab
