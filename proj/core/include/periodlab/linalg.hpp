#pragma once

#include "periodlab/error.hpp"
#include "periodlab/finite_field.hpp"
#include "periodlab/model_field.hpp"
#include "periodlab/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace periodlab {

/// Field elements usable by the generic elimination routines.
template <typename F>
concept FieldElement = requires(const F a, const F b) {
    { a + b } -> std::same_as<F>;
    { a - b } -> std::same_as<F>;
    { a * b } -> std::same_as<F>;
    { a / b } -> std::same_as<F>;
    { -a } -> std::same_as<F>;
    { a.is_zero() } -> std::same_as<bool>;
    { a.zero_like() } -> std::same_as<F>;
    { a.one_like() } -> std::same_as<F>;
    { a == b } -> std::same_as<bool>;
};

template <FieldElement F>
using Vector = std::vector<F>;

/// Dense row-major matrix. `zero` fixes the field instance (modulus for F_p,
/// variable count for the model field) so empty matrices still know it.
template <FieldElement F>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, F zero = F{})
        : rows_(rows), cols_(cols), zero_(zero.zero_like()), data_(rows * cols, zero_) {}

    static Matrix from_rows(const std::vector<Vector<F>>& rows, std::size_t cols, F zero = F{}) {
        Matrix m(rows.size(), cols, zero);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols)
                throw Error(ErrorCode::invalid_argument, "ragged matrix rows");
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    static Matrix identity(std::size_t n, F zero = F{}) {
        Matrix m(n, n, zero);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = m.zero_.one_like();
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    const F& zero() const noexcept { return zero_; }

    F& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const F& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Vector<F> row(std::size_t i) const {
        return Vector<F>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                         data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_, zero_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw Error(ErrorCode::invalid_argument, "matrix shape mismatch");
        Matrix r(rows_, o.cols_, zero_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const F& a = (*this)(i, k);
                if (a.is_zero()) continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    if (!o(k, j).is_zero()) r(i, j) = r(i, j) + a * o(k, j);
            }
        return r;
    }

    Vector<F> apply(const Vector<F>& v) const {
        if (v.size() != cols_) throw Error(ErrorCode::invalid_argument, "vector length mismatch");
        Vector<F> r(rows_, zero_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (!(*this)(i, j).is_zero() && !v[j].is_zero()) r[i] = r[i] + (*this)(i, j) * v[j];
        return r;
    }

    bool is_zero() const {
        for (const auto& x : data_)
            if (!x.is_zero()) return false;
        return true;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    F zero_{};
    std::vector<F> data_;
};

template <FieldElement F>
struct RrefResult {
    Matrix<F> rref;
    std::vector<std::size_t> pivot_columns;
    std::size_t rank = 0;
    /// One vector per free column: 1 at the free column, minus the rref column
    /// entries at the pivot positions.
    std::vector<Vector<F>> kernel_basis;
};

/// Gauss-Jordan elimination. rank + kernel_basis.size() == cols.
template <FieldElement F>
RrefResult<F> rref_rank_kernel(const Matrix<F>& m) {
    RrefResult<F> out;
    Matrix<F> a = m;
    const std::size_t rows = a.rows();
    const std::size_t cols = a.cols();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && a(piv, c).is_zero()) ++piv;
        if (piv == rows) continue;
        if (piv != r)
            for (std::size_t j = 0; j < cols; ++j) std::swap(a(r, j), a(piv, j));
        const F inv = a.zero().one_like() / a(r, c);
        for (std::size_t j = c; j < cols; ++j)
            if (!a(r, j).is_zero()) a(r, j) = a(r, j) * inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a(i, c).is_zero()) continue;
            const F factor = a(i, c);
            for (std::size_t j = c; j < cols; ++j)
                if (!a(r, j).is_zero()) a(i, j) = a(i, j) - factor * a(r, j);
        }
        out.pivot_columns.push_back(c);
        ++r;
    }
    out.rank = r;

    std::vector<bool> is_pivot(cols, false);
    for (auto c : out.pivot_columns) is_pivot[c] = true;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        Vector<F> v(cols, a.zero());
        v[f] = a.zero().one_like();
        for (std::size_t i = 0; i < out.pivot_columns.size(); ++i)
            if (!a(i, f).is_zero()) v[out.pivot_columns[i]] = -a(i, f);
        out.kernel_basis.push_back(std::move(v));
    }
    out.rref = std::move(a);
    return out;
}

template <FieldElement F>
std::size_t rank(const Matrix<F>& m) {
    return rref_rank_kernel(m).rank;
}

/// Nonzero rows of the reduced echelon form of the span of `vectors`. Two
/// lists span the same subspace iff their echelon bases are equal.
template <FieldElement F>
std::vector<Vector<F>> echelon_basis(const std::vector<Vector<F>>& vectors, std::size_t dim, F zero = F{}) {
    const auto res = rref_rank_kernel(Matrix<F>::from_rows(vectors, dim, zero));
    std::vector<Vector<F>> out;
    out.reserve(res.rank);
    for (std::size_t i = 0; i < res.rank; ++i) out.push_back(res.rref.row(i));
    return out;
}

/// Row i holds the Q-coefficients of element i, after clearing all inputs to
/// one common denominator, on the union of occurring monomials in ascending
/// graded-lex order. Throws Error(mismatched_variables) if inputs disagree on
/// the variable count.
Matrix<Rational> coefficient_matrix(std::span<const ModelFieldElement> elements);

/// Monomials labelling the columns of coefficient_matrix(elements).
std::vector<Monomial> coefficient_monomials(std::span<const ModelFieldElement> elements);

/// Sparse matrix over F_p with rows stored as (column, value) lists sorted by
/// column. Used for the large pullback matrices of flag models.
class SparseFpMatrix {
public:
    using Row = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

    SparseFpMatrix(std::size_t rows, std::size_t cols, std::uint32_t p);

    std::size_t rows() const noexcept { return rows_.size(); }
    std::size_t cols() const noexcept { return cols_; }
    std::uint32_t modulus() const noexcept { return p_; }

    /// Adds `value` (reduced mod p) to entry (i, j).
    void add(std::size_t i, std::size_t j, long value);
    const Row& row(std::size_t i) const { return rows_[i]; }
    std::uint32_t at(std::size_t i, std::size_t j) const;
    std::size_t nonzeros() const;

    SparseFpMatrix operator*(const SparseFpMatrix& o) const;
    bool is_zero() const;

    Matrix<Fp> to_dense() const;

    /// Stacks `lower` below this matrix.
    SparseFpMatrix stacked(const SparseFpMatrix& lower) const;
    /// Kronecker product with the c x c identity.
    SparseFpMatrix kron_identity(std::size_t c) const;

private:
    std::vector<Row> rows_;
    std::size_t cols_;
    std::uint32_t p_;
};

/// Exact rank over F_p by sparse incremental elimination.
std::size_t rank_mod_p(const SparseFpMatrix& m);

} // namespace periodlab
