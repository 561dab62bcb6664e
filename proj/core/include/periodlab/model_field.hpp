#pragma once

#include "periodlab/rational.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace periodlab {

/// Exponent vector of a monomial in t1..tm.
using Monomial = std::vector<std::uint16_t>;

/// Graded lexicographic order: total degree first, then t1 > t2 > ... .
struct GradedLex {
    bool operator()(const Monomial& a, const Monomial& b) const noexcept;
};

/// Multivariate polynomial over Q in a fixed number of variables. Terms are
/// kept in graded-lex order with no zero coefficients.
class Polynomial {
public:
    using Terms = std::map<Monomial, Rational, GradedLex>;

    explicit Polynomial(std::size_t nvars = 0) : nvars_(nvars) {}
    Polynomial(std::size_t nvars, const Rational& constant);

    static Polynomial variable(std::size_t nvars, std::size_t index);

    std::size_t nvars() const noexcept { return nvars_; }
    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const noexcept;
    Rational constant_term() const;
    unsigned total_degree() const;

    /// Largest term under graded lex. Requires a nonzero polynomial.
    const Terms::value_type& leading_term() const { return *terms_.rbegin(); }

    void add_term(const Monomial& m, const Rational& c);

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial operator*(const Polynomial& o) const;
    Polynomial scaled(const Rational& c) const;
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    Polynomial operator-() const { return scaled(Rational(-1)); }

    /// Quotient if `divisor` divides this polynomial exactly.
    std::optional<Polynomial> divide_exact(const Polynomial& divisor) const;

    /// Largest monomial dividing every term (all zeros for the zero polynomial).
    Monomial monomial_gcd() const;
    Polynomial divided_by_monomial(const Monomial& m) const;

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }

    std::string str() const;

private:
    std::size_t nvars_;
    Terms terms_;
};

std::string monomial_str(const Monomial& m);

/// Element of the model field Q(t1,...,tm): a quotient of polynomials with a
/// monic denominator (leading coefficient 1 under graded lex). Equality is
/// decided by cross multiplication, so no polynomial gcd is required.
class ModelFieldElement {
public:
    explicit ModelFieldElement(std::size_t nvars = 0);
    ModelFieldElement(std::size_t nvars, const Rational& constant);
    explicit ModelFieldElement(Polynomial numerator);
    ModelFieldElement(Polynomial numerator, Polynomial denominator);

    /// Parses expressions such as "1+t", "2*t1*t2 - 3/2", "(1+t)/(2+t^2)".
    /// `t` is an alias of `t1`. Throws Error(parse_error) if a variable index
    /// exceeds `nvars`.
    static ModelFieldElement parse(std::string_view text, std::size_t nvars);

    /// Number of variables an expression mentions (0 for constants).
    static std::size_t variables_used(std::string_view text);

    std::size_t nvars() const noexcept { return num_.nvars(); }
    const Polynomial& numerator() const noexcept { return num_; }
    const Polynomial& denominator() const noexcept { return den_; }

    bool is_zero() const noexcept { return num_.is_zero(); }
    bool is_constant() const noexcept { return num_.is_constant() && den_.is_constant(); }

    ModelFieldElement zero_like() const { return ModelFieldElement(nvars()); }
    ModelFieldElement one_like() const { return ModelFieldElement(nvars(), Rational(1)); }
    ModelFieldElement inverse() const;

    ModelFieldElement& operator+=(const ModelFieldElement& o);
    ModelFieldElement& operator-=(const ModelFieldElement& o);
    ModelFieldElement& operator*=(const ModelFieldElement& o);
    ModelFieldElement& operator/=(const ModelFieldElement& o);
    friend ModelFieldElement operator+(ModelFieldElement a, const ModelFieldElement& b) { return a += b; }
    friend ModelFieldElement operator-(ModelFieldElement a, const ModelFieldElement& b) { return a -= b; }
    friend ModelFieldElement operator*(ModelFieldElement a, const ModelFieldElement& b) { return a *= b; }
    friend ModelFieldElement operator/(ModelFieldElement a, const ModelFieldElement& b) { return a /= b; }
    ModelFieldElement operator-() const;

    ModelFieldElement scaled(const Rational& c) const;

    friend bool operator==(const ModelFieldElement& a, const ModelFieldElement& b);

    std::string str() const;

private:
    void normalize();

    Polynomial num_;
    Polynomial den_;
};

} // namespace periodlab
