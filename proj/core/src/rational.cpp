#include "periodlab/rational.hpp"

#include "periodlab/error.hpp"

#include <cctype>

namespace periodlab {

namespace {

bool valid_integer(std::string_view s) {
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

mpz_class parse_integer(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    return mpz_class(std::string(s), 10);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

} // namespace

Rational::Rational(long num, long den) {
    if (den == 0) throw Error(ErrorCode::invalid_argument, "zero denominator");
    value_ = mpq_class(num, den);
    value_.canonicalize();
}

Rational::Rational(mpq_class v) : value_(std::move(v)) { value_.canonicalize(); }

Rational Rational::parse(std::string_view text) {
    const auto s = trim(text);
    const auto slash = s.find('/');
    const auto num_part = trim(s.substr(0, slash));
    if (!valid_integer(num_part))
        throw Error(ErrorCode::parse_error, "malformed rational '" + std::string(text) + "'");
    if (slash == std::string_view::npos) return Rational(parse_integer(num_part));
    const auto den_part = trim(s.substr(slash + 1));
    if (!valid_integer(den_part))
        throw Error(ErrorCode::parse_error, "malformed rational '" + std::string(text) + "'");
    const mpz_class den = parse_integer(den_part);
    if (den == 0) throw Error(ErrorCode::parse_error, "zero denominator in '" + std::string(text) + "'");
    return Rational(mpq_class(parse_integer(num_part), den));
}

Rational Rational::inverse() const {
    if (is_zero()) throw Error(ErrorCode::invalid_argument, "division by zero");
    return Rational(mpq_class(1 / value_));
}

std::string Rational::str() const {
    if (is_integer()) return value_.get_num().get_str();
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

Rational& Rational::operator+=(const Rational& o) { value_ += o.value_; return *this; }
Rational& Rational::operator-=(const Rational& o) { value_ -= o.value_; return *this; }
Rational& Rational::operator*=(const Rational& o) { value_ *= o.value_; return *this; }
Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw Error(ErrorCode::invalid_argument, "division by zero");
    value_ /= o.value_;
    return *this;
}

namespace {
long valuation(mpz_class v, unsigned long p) {
    long k = 0;
    while (mpz_divisible_ui_p(v.get_mpz_t(), p)) {
        v /= p;
        ++k;
    }
    return k;
}
} // namespace

long p_adic_valuation(const Rational& x, unsigned long p) {
    if (x.is_zero()) throw Error(ErrorCode::invalid_argument, "valuation of zero");
    return valuation(x.numerator(), p) - valuation(x.denominator(), p);
}

bool is_prime(unsigned long n) {
    if (n < 2) return false;
    for (unsigned long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

} // namespace periodlab
