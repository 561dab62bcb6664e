#pragma once

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <ostream>
#include <string>
#include <string_view>

namespace periodlab {

/// Exact rational number in lowest terms with positive denominator.
class Rational {
public:
    Rational() = default;

    template <std::integral I>
    Rational(I v) : value_(static_cast<long>(v)) {}

    Rational(long num, long den);
    explicit Rational(mpq_class v);
    explicit Rational(const mpz_class& v) : value_(v) {}

    /// Parses "a", "-a" or "a/b". Throws Error(parse_error) on malformed input
    /// or a zero denominator.
    static Rational parse(std::string_view text);

    const mpq_class& value() const noexcept { return value_; }
    mpz_class numerator() const { return value_.get_num(); }
    mpz_class denominator() const { return value_.get_den(); }

    bool is_zero() const noexcept { return sgn(value_) == 0; }
    bool is_integer() const noexcept { return value_.get_den() == 1; }
    int sign() const noexcept { return sgn(value_); }

    Rational zero_like() const { return Rational(); }
    Rational one_like() const { return Rational(1); }
    Rational inverse() const;
    Rational abs() const { return Rational(mpq_class(::abs(value_))); }

    /// "a" for integers, otherwise "a/b".
    std::string str() const;

    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    Rational operator-() const { return Rational(mpq_class(-value_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
             : c > 0 ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    mpq_class value_;
};

/// p-adic valuation of a nonzero rational.
long p_adic_valuation(const Rational& x, unsigned long p);

bool is_prime(unsigned long n);

} // namespace periodlab
