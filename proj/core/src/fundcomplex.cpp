#include "periodlab/fundcomplex.hpp"

#include "periodlab/error.hpp"
#include "periodlab/rational.hpp"

#include <algorithm>
#include <bit>
#include <mutex>
#include <set>

namespace periodlab {

std::size_t root_count(RootMask mask) { return static_cast<std::size_t>(std::popcount(mask)); }

std::string root_set_str(RootMask mask) {
    std::string s = "{";
    bool first = true;
    for (unsigned i = 0; i < 32; ++i) {
        if (!(mask >> i & 1u)) continue;
        s += (first ? "a" : ",a") + std::to_string(i + 1);
        first = false;
    }
    return s + "}";
}

namespace {

using GfRow = std::vector<std::uint8_t>;

// Reduced row echelon form over F_q; zero rows are dropped.
std::vector<GfRow> gf_rref(const GaloisField& gf, std::vector<GfRow> rows, std::size_t n) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < rows.size(); ++c) {
        std::size_t piv = r;
        while (piv < rows.size() && rows[piv][c] == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[r], rows[piv]);
        const auto inv = gf.inv(rows[r][c]);
        for (auto& x : rows[r]) x = gf.mul(x, inv);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][c] == 0) continue;
            const auto f = rows[i][c];
            for (std::size_t j = 0; j < n; ++j) rows[i][j] = gf.sub(rows[i][j], gf.mul(f, rows[r][j]));
        }
        ++r;
    }
    rows.resize(r);
    return rows;
}

GfRow flatten(const std::vector<GfRow>& rows) {
    GfRow out;
    for (const auto& r : rows) out.insert(out.end(), r.begin(), r.end());
    return out;
}

std::vector<GfRow> unflatten(const GfRow& flat, std::size_t n) {
    std::vector<GfRow> rows;
    for (std::size_t i = 0; i < flat.size(); i += n) rows.emplace_back(flat.begin() + i, flat.begin() + i + n);
    return rows;
}

// Dimensions j in 1..n-1 with alpha_j not in I.
std::vector<std::size_t> cut_dims(std::size_t n, RootMask I) {
    std::vector<std::size_t> out;
    for (std::size_t j = 1; j < n; ++j)
        if (!(I >> (j - 1) & 1u)) out.push_back(j);
    return out;
}

// [m]_q!
std::uint64_t q_factorial(std::size_t m, std::uint64_t q) {
    std::uint64_t f = 1;
    for (std::size_t i = 1; i <= m; ++i) {
        std::uint64_t qi = 0, pw = 1;
        for (std::size_t k = 0; k < i; ++k, pw *= q) qi += pw;
        f *= qi;
    }
    return f;
}

bool is_subset(RootMask a, RootMask b) { return (a & ~b) == 0; }

} // namespace

std::uint64_t FiniteFlagModel::expected_size(std::size_t n, unsigned q, RootMask I) {
    if (n == 0 || n > 8) throw Error(ErrorCode::capacity, "flag counts are limited to n <= 8");
    std::uint64_t num = q_factorial(n, q), den = 1;
    std::size_t prev = 0;
    auto cuts = cut_dims(n, I);
    cuts.push_back(n);
    for (auto c : cuts) {
        den *= q_factorial(c - prev, q);
        prev = c;
    }
    return num / den;
}

std::string FiniteFlagModel::label(RootMask I, std::size_t idx) const {
    const auto dims = cut_dims(n_, I);
    const auto& pt = point(I, idx);
    std::string s;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (k) s += " < ";
        s += "<";
        const auto rows = unflatten(subspaces_[dims[k]][pt[k]], n_);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r) s += ",";
            for (auto x : rows[r]) s += std::to_string(x);
        }
        s += ">";
    }
    return s.empty() ? "<pt>" : s;
}

const std::vector<std::uint32_t>& FiniteFlagModel::projection(RootMask I, RootMask I_prime) const {
    auto it = projections_.find({I, I_prime});
    if (it == projections_.end())
        throw Error(ErrorCode::invalid_argument,
                    "no projection " + root_set_str(I) + " -> " + root_set_str(I_prime) + " (need I subset of I')");
    return it->second;
}

FiniteFlagModel build_finite_flag_model(std::size_t n, unsigned q) {
    if (n < 2) throw Error(ErrorCode::invalid_argument, "flag models need n >= 2");
    if (n > 4) throw Error(ErrorCode::capacity, "flag models are limited to n <= 4");
    if (prime_power_decomposition(q).first == 0)
        throw Error(ErrorCode::invalid_argument, "q = " + std::to_string(q) + " is not a prime power");
    if (q > 9) throw Error(ErrorCode::capacity, "flag models are limited to q <= 9");
    const std::uint64_t total = FiniteFlagModel::expected_size(n, q, 0);
    if (total > kMaxFlagModelPoints)
        throw Error(ErrorCode::capacity, "|X_empty| = " + std::to_string(total) + " exceeds the limit of " +
                                             std::to_string(kMaxFlagModelPoints));

    const GaloisField gf(q);
    FiniteFlagModel m;
    m.n_ = n;
    m.q_ = q;

    std::vector<GfRow> vectors;
    {
        std::uint64_t qn = 1;
        for (std::size_t i = 0; i < n; ++i) qn *= q;
        for (std::uint64_t code = 1; code < qn; ++code) {
            GfRow v(n);
            for (std::uint64_t c = code, i = 0; i < n; ++i, c /= q) v[n - 1 - i] = static_cast<std::uint8_t>(c % q);
            vectors.push_back(std::move(v));
        }
    }

    // Subspaces of each dimension 0..n-1 (ids in lexicographic order of the
    // flattened echelon basis) and the superspaces one dimension up.
    m.subspaces_.assign(n, {});
    m.subspaces_[0].push_back({});
    std::vector<std::vector<std::vector<std::uint32_t>>> up(n);
    for (std::size_t k = 1; k < n; ++k) {
        std::map<GfRow, std::uint32_t> found;
        std::vector<std::vector<GfRow>> raw_up(m.subspaces_[k - 1].size());
        for (std::size_t id = 0; id < m.subspaces_[k - 1].size(); ++id) {
            const auto base = unflatten(m.subspaces_[k - 1][id], n);
            std::set<GfRow> ext;
            for (const auto& v : vectors) {
                auto rows = base;
                rows.push_back(v);
                rows = gf_rref(gf, std::move(rows), n);
                if (rows.size() == k) ext.insert(flatten(rows));
            }
            for (const auto& e : ext) found.emplace(e, 0);
            raw_up[id].assign(ext.begin(), ext.end());
        }
        std::uint32_t next = 0;
        for (auto& [flat, id] : found) {
            id = next++;
            m.subspaces_[k].push_back(flat);
        }
        up[k - 1].resize(raw_up.size());
        for (std::size_t id = 0; id < raw_up.size(); ++id)
            for (const auto& e : raw_up[id]) up[k - 1][id].push_back(found.at(e));
    }

    // Full flags V_1 < ... < V_{n-1}, lexicographic in ids.
    std::vector<std::vector<std::uint32_t>> full;
    std::vector<std::uint32_t> chain;
    const auto extend = [&](auto&& self, std::uint32_t prev) -> void {
        const std::size_t k = chain.size();
        if (k + 1 == n) {
            full.push_back(chain);
            return;
        }
        for (auto id : up[k][prev]) {
            chain.push_back(id);
            self(self, id);
            chain.pop_back();
        }
    };
    extend(extend, 0);

    const RootMask all = m.full_mask();
    m.points_.assign(std::size_t{all} + 1, {});
    std::vector<std::map<std::vector<std::uint32_t>, std::uint32_t>> index(std::size_t{all} + 1);
    const auto restrict_to = [n](const std::vector<std::uint32_t>& pt, RootMask from, RootMask to) {
        const auto src = cut_dims(n, from);
        std::vector<std::uint32_t> out;
        for (std::size_t k = 0; k < src.size(); ++k)
            if (!(to >> (src[k] - 1) & 1u)) out.push_back(pt[k]);
        return out;
    };
    for (RootMask I = 0; I <= all; ++I) {
        std::set<std::vector<std::uint32_t>> pts;
        for (const auto& f : full) pts.insert(restrict_to(f, 0, I));
        m.points_[I].assign(pts.begin(), pts.end());
        for (std::uint32_t i = 0; i < m.points_[I].size(); ++i) index[I].emplace(m.points_[I][i], i);
        if (m.points_[I].size() != FiniteFlagModel::expected_size(n, q, I))
            throw Error(ErrorCode::invalid_argument, "coset count mismatch for X_" + root_set_str(I));
    }
    for (RootMask I = 0; I <= all; ++I)
        for (RootMask J = 0; J <= all; ++J) {
            if (!is_subset(I, J)) continue;
            std::vector<std::uint32_t> map(m.points_[I].size());
            for (std::size_t i = 0; i < map.size(); ++i) map[i] = index[J].at(restrict_to(m.points_[I][i], I, J));
            std::vector<bool> hit(m.points_[J].size(), false);
            for (auto y : map) hit[y] = true;
            if (std::find(hit.begin(), hit.end(), false) != hit.end())
                throw Error(ErrorCode::invalid_argument,
                            "projection " + root_set_str(I) + " -> " + root_set_str(J) + " is not surjective");
            m.projections_.emplace(std::make_pair(I, J), std::move(map));
        }
    for (RootMask I = 0; I <= all; ++I)
        for (RootMask J = I; J <= all; ++J)
            for (RootMask K = J; K <= all; ++K) {
                if (!is_subset(I, J) || !is_subset(J, K)) continue;
                const auto& a = m.projections_.at({I, J});
                const auto& b = m.projections_.at({J, K});
                const auto& c = m.projections_.at({I, K});
                for (std::size_t x = 0; x < a.size(); ++x)
                    if (b[a[x]] != c[x])
                        throw Error(ErrorCode::invalid_argument, "projections do not commute on " + root_set_str(I) +
                                                                     " -> " + root_set_str(J) + " -> " +
                                                                     root_set_str(K));
            }
    return m;
}

std::shared_ptr<const FiniteFlagModel> cached_flag_model(std::size_t n, unsigned q) {
    static std::mutex mu;
    static std::map<std::pair<std::size_t, unsigned>, std::shared_ptr<const FiniteFlagModel>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[{n, q}];
    if (!slot) slot = std::make_shared<const FiniteFlagModel>(build_finite_flag_model(n, q));
    return slot;
}

StalkSelector::StalkSelector(const FiniteFlagModel& m, std::vector<std::vector<std::uint32_t>> subsets)
    : subsets_(std::move(subsets)) {
    const RootMask all = m.full_mask();
    if (subsets_.size() != std::size_t{all} + 1)
        throw Error(ErrorCode::invalid_selector, "selector needs one subset for each of the " +
                                                     std::to_string(std::size_t{all} + 1) + " subsets of Delta");
    for (RootMask I = 0; I <= all; ++I) {
        auto& s = subsets_[I];
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        if (s.empty()) throw Error(ErrorCode::invalid_selector, "X_" + root_set_str(I) + "(x) is empty");
        if (s.back() >= m.size(I))
            throw Error(ErrorCode::invalid_selector, "index " + std::to_string(s.back()) + " outside X_" +
                                                         root_set_str(I));
    }
    for (RootMask I = 0; I <= all; ++I)
        for (std::size_t a = 0; a + 1 < m.n(); ++a) {
            const RootMask J = I | (RootMask{1} << a);
            if (J == I) continue;
            const auto& p = m.projection(I, J);
            for (auto x : subsets_[I])
                if (!std::binary_search(subsets_[J].begin(), subsets_[J].end(), p[x]))
                    throw Error(ErrorCode::invalid_selector, "p_{I,I'} does not map X_I(x) into X_I'(x) for I = " +
                                                                 root_set_str(I) + ", I' = " + root_set_str(J));
        }
}

StalkSelector StalkSelector::full(const FiniteFlagModel& m) {
    std::vector<std::vector<std::uint32_t>> s(std::size_t{m.full_mask()} + 1);
    for (RootMask I = 0; I <= m.full_mask(); ++I) {
        s[I].resize(m.size(I));
        for (std::uint32_t i = 0; i < s[I].size(); ++i) s[I][i] = i;
    }
    return StalkSelector(m, std::move(s));
}

StalkSelector StalkSelector::generated_by(const FiniteFlagModel& m, const std::vector<std::uint32_t>& flags) {
    if (flags.empty()) throw Error(ErrorCode::invalid_selector, "selector needs at least one full flag");
    std::vector<std::vector<std::uint32_t>> s(std::size_t{m.full_mask()} + 1);
    for (auto x : flags)
        if (x >= m.size(0)) throw Error(ErrorCode::invalid_selector, "flag index " + std::to_string(x) + " out of range");
    for (RootMask I = 0; I <= m.full_mask(); ++I) {
        const auto& p = m.projection(0, I);
        for (auto x : flags) s[I].push_back(p[x]);
    }
    return StalkSelector(m, std::move(s));
}

StalkSelector StalkSelector::singleton(const FiniteFlagModel& m, std::size_t flag_index) {
    return generated_by(m, {static_cast<std::uint32_t>(flag_index)});
}

ChainComplex::ChainComplex(std::vector<std::size_t> dims, std::vector<SparseFpMatrix> differentials, std::uint32_t p)
    : dims_(std::move(dims)), diffs_(std::move(differentials)), p_(p) {
    if (dims_.empty()) throw Error(ErrorCode::invalid_argument, "complex needs at least one term");
    if (diffs_.size() + 1 != dims_.size())
        throw Error(ErrorCode::invalid_argument, "complex needs one differential between consecutive terms");
    for (std::size_t k = 0; k < diffs_.size(); ++k)
        if (diffs_[k].rows() != dims_[k + 1] || diffs_[k].cols() != dims_[k] || diffs_[k].modulus() != p_)
            throw Error(ErrorCode::invalid_argument, "differential D_" + std::to_string(k) + " has the wrong shape");
}

bool ChainComplex::squares_to_zero() const {
    for (std::size_t k = 0; k + 1 < diffs_.size(); ++k)
        if (!(diffs_[k + 1] * diffs_[k]).is_zero()) return false;
    return true;
}

long ChainComplex::euler_characteristic() const {
    long e = 0;
    for (std::size_t k = 0; k < dims_.size(); ++k) e += (k % 2 ? -1 : 1) * static_cast<long>(dims_[k]);
    return e;
}

ChainComplex assemble_fundamental_complex(const FiniteFlagModel& m, const StalkSelector& sel, std::size_t coeff_dim,
                                          std::uint32_t p) {
    if (!is_prime(p)) throw Error(ErrorCode::invalid_argument, "coefficient modulus " + std::to_string(p) + " is not prime");
    if (coeff_dim == 0) throw Error(ErrorCode::invalid_argument, "coefficient dimension must be positive");
    const RootMask all = m.full_mask();
    const std::size_t r = m.simple_root_count();

    // Summands of C^k: masks with |Delta \ I| = k, ascending; local offsets.
    std::vector<std::vector<RootMask>> by_degree(r + 1);
    for (RootMask I = 0; I <= all; ++I) by_degree[r - root_count(I)].push_back(I);
    std::vector<std::size_t> offset(std::size_t{all} + 1), dims(r + 1, 0);
    std::vector<std::vector<std::int64_t>> local(std::size_t{all} + 1);
    for (std::size_t k = 0; k <= r; ++k)
        for (auto I : by_degree[k]) {
            offset[I] = dims[k];
            const auto& s = sel.subset(I);
            local[I].assign(m.size(I), -1);
            for (std::size_t i = 0; i < s.size(); ++i) local[I][s[i]] = static_cast<std::int64_t>(i);
            dims[k] += s.size();
        }

    std::vector<SparseFpMatrix> diffs;
    for (std::size_t k = 0; k < r; ++k) {
        SparseFpMatrix d(dims[k + 1], dims[k], p);
        for (auto Ip : by_degree[k])
            for (std::size_t a = 0; a < r; ++a) {
                if (!(Ip >> a & 1u)) continue;
                const RootMask I = Ip & ~(RootMask{1} << a);
                const auto pos = root_count(Ip & ((RootMask{2} << a) - 1));
                const long sign = pos % 2 ? -1 : 1;
                const auto& proj = m.projection(I, Ip);
                for (auto x : sel.subset(I)) {
                    const auto y = local[Ip][proj[x]];
                    d.add(offset[I] + static_cast<std::size_t>(local[I][x]), offset[Ip] + static_cast<std::size_t>(y),
                          sign);
                }
            }
        diffs.push_back(coeff_dim == 1 ? std::move(d) : d.kron_identity(coeff_dim));
    }
    for (auto& x : dims) x *= coeff_dim;
    ChainComplex c(std::move(dims), std::move(diffs), p);
    if (!c.squares_to_zero()) throw Error(ErrorCode::invalid_argument, "assembled differentials do not square to zero");
    return c;
}

std::vector<std::size_t> homology_dims(const ChainComplex& c) {
    std::vector<std::size_t> ranks;
    for (const auto& d : c.differentials()) ranks.push_back(rank_mod_p(d));
    std::vector<std::size_t> h;
    for (std::size_t k = 0; k < c.dims().size(); ++k) {
        std::size_t v = c.dims()[k];
        if (k < ranks.size()) v -= ranks[k];
        if (k > 0) v -= ranks[k - 1];
        h.push_back(v);
    }
    return h;
}

std::size_t stalk_dimension(const FiniteFlagModel& m, const StalkSelector& sel, RootMask I, std::size_t coeff_dim) {
    if (I > m.full_mask()) throw Error(ErrorCode::invalid_argument, root_set_str(I) + " is not a subset of Delta");
    return sel.subset(I).size() * coeff_dim;
}

std::vector<std::size_t> e1_page(const FiniteFlagModel& m, const StalkSelector& sel) {
    const std::size_t r = m.simple_root_count();
    std::vector<std::size_t> e(r, 0);
    for (RootMask I = 0; I <= m.full_mask(); ++I) {
        const std::size_t k = r - root_count(I);
        if (k >= 1) e[k - 1] += sel.subset(I).size();
    }
    return e;
}

std::vector<FinitePart> extend_disjoint_cover(const FinitePart& X, const FinitePart& F,
                                              const std::vector<FinitePart>& cover) {
    const std::set<int> xs(X.begin(), X.end()), fs(F.begin(), F.end());
    if (xs.size() != X.size()) throw Error(ErrorCode::invalid_cover, "X has repeated elements");
    for (int f : fs)
        if (!xs.count(f)) throw Error(ErrorCode::invalid_cover, "F is not contained in X: " + std::to_string(f));
    std::set<int> seen;
    for (std::size_t k = 0; k < cover.size(); ++k) {
        if (cover[k].empty()) throw Error(ErrorCode::invalid_cover, "cover part " + std::to_string(k) + " is empty");
        for (int v : cover[k]) {
            if (!fs.count(v))
                throw Error(ErrorCode::invalid_cover, "cover part " + std::to_string(k) + " leaves F at " + std::to_string(v));
            if (!seen.insert(v).second)
                throw Error(ErrorCode::invalid_cover, "cover parts overlap at " + std::to_string(v));
        }
    }
    if (seen != fs) throw Error(ErrorCode::invalid_cover, "cover does not cover F");
    if (cover.empty()) {
        return {FinitePart(xs.begin(), xs.end())};
    }
    std::vector<FinitePart> out;
    for (const auto& part : cover) {
        FinitePart s = part;
        std::sort(s.begin(), s.end());
        out.push_back(std::move(s));
    }
    for (int x : xs)
        if (!fs.count(x)) out.front().push_back(x);
    std::sort(out.front().begin(), out.front().end());
    return out;
}

} // namespace periodlab
