#include "periodlab/linalg.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace periodlab {

namespace {

std::size_t common_nvars(std::span<const ModelFieldElement> elements) {
    if (elements.empty()) return 0;
    const std::size_t n = elements.front().nvars();
    for (const auto& e : elements)
        if (e.nvars() != n)
            throw Error(ErrorCode::mismatched_variables,
                        "model field elements over different variable sets (" + std::to_string(n) + " vs " +
                            std::to_string(e.nvars()) + ")");
    return n;
}

// Numerators of the inputs after clearing to the product of their distinct
// denominators.
std::vector<Polynomial> cleared_numerators(std::span<const ModelFieldElement> elements) {
    const std::size_t nvars = common_nvars(elements);
    std::vector<Polynomial> dens;
    for (const auto& e : elements)
        if (std::find(dens.begin(), dens.end(), e.denominator()) == dens.end()) dens.push_back(e.denominator());
    std::vector<Polynomial> out;
    out.reserve(elements.size());
    for (const auto& e : elements) {
        Polynomial factor(nvars, Rational(1));
        for (const auto& d : dens)
            if (!(d == e.denominator())) factor = factor * d;
        out.push_back(e.numerator() * factor);
    }
    return out;
}

} // namespace

std::vector<Monomial> coefficient_monomials(std::span<const ModelFieldElement> elements) {
    std::set<Monomial, GradedLex> monomials;
    for (const auto& p : cleared_numerators(elements))
        for (const auto& [m, c] : p.terms()) monomials.insert(m);
    return {monomials.begin(), monomials.end()};
}

Matrix<Rational> coefficient_matrix(std::span<const ModelFieldElement> elements) {
    const auto nums = cleared_numerators(elements);
    std::set<Monomial, GradedLex> monomials;
    for (const auto& p : nums)
        for (const auto& [m, c] : p.terms()) monomials.insert(m);
    std::map<Monomial, std::size_t, GradedLex> column;
    for (const auto& m : monomials) column.emplace(m, column.size());

    Matrix<Rational> out(nums.size(), monomials.size());
    for (std::size_t i = 0; i < nums.size(); ++i)
        for (const auto& [m, c] : nums[i].terms()) out(i, column.at(m)) = c;
    return out;
}

// ------------------------------------------------------------ SparseFpMatrix

SparseFpMatrix::SparseFpMatrix(std::size_t rows, std::size_t cols, std::uint32_t p)
    : rows_(rows), cols_(cols), p_(p) {
    if (p < 2) throw Error(ErrorCode::invalid_argument, "modulus must be prime");
}

void SparseFpMatrix::add(std::size_t i, std::size_t j, long value) {
    if (i >= rows_.size() || j >= cols_) throw Error(ErrorCode::invalid_argument, "sparse index out of range");
    const long m = static_cast<long>(p_);
    const auto v = static_cast<std::uint32_t>(((value % m) + m) % m);
    if (v == 0) return;
    auto& row = rows_[i];
    const auto col = static_cast<std::uint32_t>(j);
    auto it = std::lower_bound(row.begin(), row.end(), col, [](const auto& e, std::uint32_t c) { return e.first < c; });
    if (it != row.end() && it->first == col) {
        it->second = (it->second + v) % p_;
        if (it->second == 0) row.erase(it);
    } else {
        row.insert(it, {col, v});
    }
}

std::uint32_t SparseFpMatrix::at(std::size_t i, std::size_t j) const {
    const auto& row = rows_.at(i);
    const auto col = static_cast<std::uint32_t>(j);
    auto it = std::lower_bound(row.begin(), row.end(), col, [](const auto& e, std::uint32_t c) { return e.first < c; });
    return (it != row.end() && it->first == col) ? it->second : 0;
}

std::size_t SparseFpMatrix::nonzeros() const {
    std::size_t n = 0;
    for (const auto& r : rows_) n += r.size();
    return n;
}

SparseFpMatrix SparseFpMatrix::operator*(const SparseFpMatrix& o) const {
    if (cols_ != o.rows() || p_ != o.p_) throw Error(ErrorCode::invalid_argument, "sparse shape mismatch");
    SparseFpMatrix r(rows_.size(), o.cols_, p_);
    std::vector<std::uint64_t> acc(o.cols_, 0);
    std::vector<std::uint32_t> touched;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        touched.clear();
        for (const auto& [k, a] : rows_[i])
            for (const auto& [j, b] : o.rows_[k]) {
                if (acc[j] == 0) touched.push_back(j);
                acc[j] = (acc[j] + std::uint64_t{a} * b) % p_;
                if (acc[j] == 0) acc[j] = p_;  // keep marked as touched
            }
        std::sort(touched.begin(), touched.end());
        for (auto j : touched) {
            const auto v = static_cast<std::uint32_t>(acc[j] % p_);
            if (v) r.rows_[i].push_back({j, v});
            acc[j] = 0;
        }
    }
    return r;
}

bool SparseFpMatrix::is_zero() const {
    return std::all_of(rows_.begin(), rows_.end(), [](const Row& r) { return r.empty(); });
}

Matrix<Fp> SparseFpMatrix::to_dense() const {
    Matrix<Fp> m(rows_.size(), cols_, Fp(0, p_));
    for (std::size_t i = 0; i < rows_.size(); ++i)
        for (const auto& [j, v] : rows_[i]) m(i, j) = Fp(v, p_);
    return m;
}

SparseFpMatrix SparseFpMatrix::stacked(const SparseFpMatrix& lower) const {
    if (lower.cols_ != cols_ || lower.p_ != p_) throw Error(ErrorCode::invalid_argument, "sparse shape mismatch");
    SparseFpMatrix r(0, cols_, p_);
    r.rows_ = rows_;
    r.rows_.insert(r.rows_.end(), lower.rows_.begin(), lower.rows_.end());
    return r;
}

SparseFpMatrix SparseFpMatrix::kron_identity(std::size_t c) const {
    SparseFpMatrix r(rows_.size() * c, cols_ * c, p_);
    for (std::size_t i = 0; i < rows_.size(); ++i)
        for (std::size_t a = 0; a < c; ++a)
            for (const auto& [j, v] : rows_[i])
                r.rows_[i * c + a].push_back({static_cast<std::uint32_t>(j * c + a), v});
    return r;
}

std::size_t rank_mod_p(const SparseFpMatrix& m) {
    const std::uint32_t p = m.modulus();
    const auto inverse = [p](std::uint32_t v) { return Fp(v, p).inverse().value(); };
    // pivot column -> reduced row with leading coefficient 1
    std::map<std::uint32_t, SparseFpMatrix::Row> pivots;
    SparseFpMatrix::Row work, next;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        work = m.row(i);
        while (!work.empty()) {
            const auto [lead, coef] = work.front();
            auto it = pivots.find(lead);
            if (it == pivots.end()) {
                const std::uint64_t inv = inverse(coef);
                for (auto& e : work) e.second = static_cast<std::uint32_t>(e.second * inv % p);
                pivots.emplace(lead, std::move(work));
                work.clear();
                break;
            }
            // work -= coef * pivot
            const auto& piv = it->second;
            next.clear();
            std::size_t a = 0, b = 0;
            while (a < work.size() || b < piv.size()) {
                if (b == piv.size() || (a < work.size() && work[a].first < piv[b].first)) {
                    next.push_back(work[a++]);
                } else if (a == work.size() || piv[b].first < work[a].first) {
                    const auto v = static_cast<std::uint32_t>((std::uint64_t{p - piv[b].second} * coef) % p);
                    if (v) next.push_back({piv[b].first, v});
                    ++b;
                } else {
                    const auto v = static_cast<std::uint32_t>(
                        (work[a].second + std::uint64_t{p - piv[b].second} * coef) % p);
                    if (v) next.push_back({work[a].first, v});
                    ++a;
                    ++b;
                }
            }
            std::swap(work, next);
        }
    }
    return pivots.size();
}

} // namespace periodlab
