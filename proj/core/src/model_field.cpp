#include "periodlab/model_field.hpp"

#include "periodlab/error.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace periodlab {

bool GradedLex::operator()(const Monomial& a, const Monomial& b) const noexcept {
    const auto da = std::accumulate(a.begin(), a.end(), 0u);
    const auto db = std::accumulate(b.begin(), b.end(), 0u);
    if (da != db) return da < db;
    // Lexicographic with t1 > t2 > ...: a < b iff at the first difference b has
    // the larger exponent.
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::string monomial_str(const Monomial& m) {
    std::string out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) continue;
        if (!out.empty()) out += "*";
        out += m.size() == 1 ? "t" : "t" + std::to_string(i + 1);
        if (m[i] > 1) out += "^" + std::to_string(m[i]);
    }
    return out.empty() ? "1" : out;
}

// ---------------------------------------------------------------- Polynomial

Polynomial::Polynomial(std::size_t nvars, const Rational& constant) : nvars_(nvars) {
    add_term(Monomial(nvars, 0), constant);
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t index) {
    if (index >= nvars) throw Error(ErrorCode::invalid_argument, "variable index out of range");
    Polynomial p(nvars);
    Monomial m(nvars, 0);
    m[index] = 1;
    p.add_term(m, Rational(1));
    return p;
}

bool Polynomial::is_constant() const noexcept {
    if (terms_.empty()) return true;
    if (terms_.size() > 1) return false;
    const auto& m = terms_.begin()->first;
    return std::all_of(m.begin(), m.end(), [](auto e) { return e == 0; });
}

Rational Polynomial::constant_term() const {
    const auto it = terms_.find(Monomial(nvars_, 0));
    return it == terms_.end() ? Rational() : it->second;
}

unsigned Polynomial::total_degree() const {
    if (terms_.empty()) return 0;
    const auto& m = terms_.rbegin()->first;
    return std::accumulate(m.begin(), m.end(), 0u);
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
    if (m.size() != nvars_) throw Error(ErrorCode::mismatched_variables, "monomial arity mismatch");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    if (o.nvars_ != nvars_) throw Error(ErrorCode::mismatched_variables, "polynomials over different variable sets");
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    if (o.nvars_ != nvars_) throw Error(ErrorCode::mismatched_variables, "polynomials over different variable sets");
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    if (o.nvars_ != nvars_) throw Error(ErrorCode::mismatched_variables, "polynomials over different variable sets");
    Polynomial r(nvars_);
    Monomial m(nvars_);
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_) {
            for (std::size_t i = 0; i < nvars_; ++i) m[i] = static_cast<std::uint16_t>(ma[i] + mb[i]);
            r.add_term(m, ca * cb);
        }
    return r;
}

Polynomial Polynomial::scaled(const Rational& c) const {
    Polynomial r(nvars_);
    if (c.is_zero()) return r;
    for (const auto& [m, v] : terms_) r.terms_.emplace_hint(r.terms_.end(), m, v * c);
    return r;
}

std::optional<Polynomial> Polynomial::divide_exact(const Polynomial& divisor) const {
    if (divisor.nvars_ != nvars_) throw Error(ErrorCode::mismatched_variables, "polynomials over different variable sets");
    if (divisor.is_zero()) throw Error(ErrorCode::invalid_argument, "division by zero polynomial");
    const auto& [lm, lc] = divisor.leading_term();
    Polynomial rem = *this;
    Polynomial quot(nvars_);
    Monomial m(nvars_);
    while (!rem.is_zero()) {
        const auto& [rm, rc] = rem.leading_term();
        for (std::size_t i = 0; i < nvars_; ++i) {
            if (rm[i] < lm[i]) return std::nullopt;
            m[i] = static_cast<std::uint16_t>(rm[i] - lm[i]);
        }
        Polynomial t(nvars_);
        t.add_term(m, rc / lc);
        quot += t;
        rem -= divisor * t;
    }
    return quot;
}

Monomial Polynomial::monomial_gcd() const {
    if (terms_.empty()) return Monomial(nvars_, 0);
    Monomial g = terms_.begin()->first;
    for (const auto& [m, c] : terms_)
        for (std::size_t i = 0; i < nvars_; ++i) g[i] = std::min(g[i], m[i]);
    return g;
}

Polynomial Polynomial::divided_by_monomial(const Monomial& d) const {
    Polynomial r(nvars_);
    Monomial m(nvars_);
    for (const auto& [mm, c] : terms_) {
        for (std::size_t i = 0; i < nvars_; ++i) m[i] = static_cast<std::uint16_t>(mm[i] - d[i]);
        r.add_term(m, c);
    }
    return r;
}

std::string Polynomial::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        const bool constant = std::all_of(m.begin(), m.end(), [](auto e) { return e == 0; });
        const Rational mag = c.abs();
        if (out.empty())
            out += c.sign() < 0 ? "-" : "";
        else
            out += c.sign() < 0 ? " - " : " + ";
        if (constant)
            out += mag.str();
        else if (mag == Rational(1))
            out += monomial_str(m);
        else
            out += mag.str() + "*" + monomial_str(m);
    }
    return out;
}

// --------------------------------------------------------- ModelFieldElement

ModelFieldElement::ModelFieldElement(std::size_t nvars) : num_(nvars), den_(nvars, Rational(1)) {}

ModelFieldElement::ModelFieldElement(std::size_t nvars, const Rational& constant)
    : num_(nvars, constant), den_(nvars, Rational(1)) {}

ModelFieldElement::ModelFieldElement(Polynomial numerator)
    : num_(std::move(numerator)), den_(num_.nvars(), Rational(1)) {}

ModelFieldElement::ModelFieldElement(Polynomial numerator, Polynomial denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
    if (num_.nvars() != den_.nvars())
        throw Error(ErrorCode::mismatched_variables, "numerator and denominator over different variable sets");
    if (den_.is_zero()) throw Error(ErrorCode::invalid_argument, "zero denominator");
    normalize();
}

void ModelFieldElement::normalize() {
    const std::size_t n = num_.nvars();
    if (num_.is_zero()) {
        den_ = Polynomial(n, Rational(1));
        return;
    }
    // Cancel the common monomial factor.
    Monomial g = num_.monomial_gcd();
    const Monomial gd = den_.monomial_gcd();
    for (std::size_t i = 0; i < n; ++i) g[i] = std::min(g[i], gd[i]);
    if (std::any_of(g.begin(), g.end(), [](auto e) { return e != 0; })) {
        num_ = num_.divided_by_monomial(g);
        den_ = den_.divided_by_monomial(g);
    }
    if (!den_.is_constant()) {
        if (auto q = num_.divide_exact(den_)) {
            num_ = std::move(*q);
            den_ = Polynomial(n, Rational(1));
        } else if (auto r = den_.divide_exact(num_)) {
            num_ = Polynomial(n, Rational(1));
            den_ = std::move(*r);
        }
    }
    const Rational lc = den_.leading_term().second;
    if (lc != Rational(1)) {
        const Rational inv = lc.inverse();
        num_ = num_.scaled(inv);
        den_ = den_.scaled(inv);
    }
}

ModelFieldElement ModelFieldElement::inverse() const {
    if (is_zero()) throw Error(ErrorCode::invalid_argument, "division by zero");
    return ModelFieldElement(den_, num_);
}

ModelFieldElement& ModelFieldElement::operator+=(const ModelFieldElement& o) {
    if (den_ == o.den_) {
        *this = ModelFieldElement(num_ + o.num_, den_);
    } else {
        *this = ModelFieldElement(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
    }
    return *this;
}

ModelFieldElement& ModelFieldElement::operator-=(const ModelFieldElement& o) {
    if (den_ == o.den_) {
        *this = ModelFieldElement(num_ - o.num_, den_);
    } else {
        *this = ModelFieldElement(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
    }
    return *this;
}

ModelFieldElement& ModelFieldElement::operator*=(const ModelFieldElement& o) {
    *this = ModelFieldElement(num_ * o.num_, den_ * o.den_);
    return *this;
}

ModelFieldElement& ModelFieldElement::operator/=(const ModelFieldElement& o) {
    if (o.is_zero()) throw Error(ErrorCode::invalid_argument, "division by zero");
    *this = ModelFieldElement(num_ * o.den_, den_ * o.num_);
    return *this;
}

ModelFieldElement ModelFieldElement::operator-() const {
    ModelFieldElement r = *this;
    r.num_ = -r.num_;
    return r;
}

ModelFieldElement ModelFieldElement::scaled(const Rational& c) const {
    ModelFieldElement r = *this;
    r.num_ = r.num_.scaled(c);
    if (r.num_.is_zero()) r.den_ = Polynomial(nvars(), Rational(1));
    return r;
}

bool operator==(const ModelFieldElement& a, const ModelFieldElement& b) {
    if (a.nvars() != b.nvars()) return false;
    if (a.den_ == b.den_) return a.num_ == b.num_;
    return a.num_ * b.den_ == b.num_ * a.den_;
}

std::string ModelFieldElement::str() const {
    if (den_.is_constant()) return num_.str();
    const auto wrap = [](const Polynomial& p) {
        const auto s = p.str();
        return p.terms().size() > 1 ? "(" + s + ")" : s;
    };
    return wrap(num_) + "/" + wrap(den_);
}

// -------------------------------------------------------------------- parser

namespace {

class ExpressionParser {
public:
    ExpressionParser(std::string_view text, std::size_t nvars) : s_(text), nvars_(nvars) {}

    ModelFieldElement parse() {
        auto v = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected character");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw Error(ErrorCode::parse_error,
                    why + " at position " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    ModelFieldElement expr() {
        auto v = term();
        for (;;) {
            if (accept('+'))
                v += term();
            else if (accept('-'))
                v -= term();
            else
                return v;
        }
    }

    ModelFieldElement term() {
        auto v = factor();
        for (;;) {
            if (accept('*')) {
                v *= factor();
            } else if (accept('/')) {
                auto d = factor();
                if (d.is_zero()) fail("division by zero");
                v /= d;
            } else {
                return v;
            }
        }
    }

    ModelFieldElement factor() {
        if (accept('-')) return -factor();
        if (accept('+')) return factor();
        auto base = primary();
        if (accept('^')) {
            const unsigned e = integer_literal();
            auto r = ModelFieldElement(nvars_, Rational(1));
            for (unsigned i = 0; i < e; ++i) r *= base;
            return r;
        }
        return base;
    }

    unsigned integer_literal() {
        skip();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected integer");
        if (pos_ - start > 4) fail("exponent too large");
        return static_cast<unsigned>(std::stoul(std::string(s_.substr(start, pos_ - start))));
    }

    ModelFieldElement primary() {
        skip();
        if (accept('(')) {
            auto v = expr();
            if (!accept(')')) fail("expected ')'");
            return v;
        }
        if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            const mpz_class z(std::string(s_.substr(start, pos_ - start)), 10);
            return ModelFieldElement(nvars_, Rational(z));
        }
        if (pos_ < s_.size() && s_[pos_] == 't') {
            ++pos_;
            std::size_t index = 1;
            if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                const std::size_t start = pos_;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
                index = std::stoul(std::string(s_.substr(start, pos_ - start)));
            }
            if (index == 0 || index > nvars_) fail("variable t" + std::to_string(index) + " outside the variable set");
            return ModelFieldElement(Polynomial::variable(nvars_, index - 1));
        }
        fail("expected number, variable or '('");
    }

    std::string_view s_;
    std::size_t nvars_;
    std::size_t pos_ = 0;
};

} // namespace

ModelFieldElement ModelFieldElement::parse(std::string_view text, std::size_t nvars) {
    return ExpressionParser(text, nvars).parse();
}

std::size_t ModelFieldElement::variables_used(std::string_view text) {
    std::size_t used = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != 't') continue;
        std::size_t j = i + 1;
        std::size_t index = 1;
        if (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
            const std::size_t start = j;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            index = std::stoul(std::string(text.substr(start, j - start)));
        }
        used = std::max(used, index);
    }
    return used;
}

} // namespace periodlab
