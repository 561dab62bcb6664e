#include "periodlab/finite_field.hpp"

#include "periodlab/error.hpp"

namespace periodlab {

Fp Fp::inverse() const {
    if (v_ == 0) throw Error(ErrorCode::invalid_argument, "inverse of zero in F_p");
    // Fermat: v^(p-2).
    std::uint64_t result = 1, base = v_;
    std::uint32_t e = p_ - 2;
    while (e) {
        if (e & 1) result = result * base % p_;
        base = base * base % p_;
        e >>= 1;
    }
    return Fp(static_cast<std::uint32_t>(result), p_);
}

std::pair<unsigned, unsigned> prime_power_decomposition(unsigned q) {
    if (q < 2) return {0, 0};
    unsigned p = 2;
    while (q % p != 0) ++p;
    unsigned k = 0;
    unsigned r = q;
    while (r % p == 0) {
        r /= p;
        ++k;
    }
    if (r != 1) return {0, 0};
    return {p, k};
}

namespace {

using Digits = std::vector<unsigned>;

Digits to_digits(unsigned a, unsigned p, unsigned k) {
    Digits d(k);
    for (unsigned i = 0; i < k; ++i) {
        d[i] = a % p;
        a /= p;
    }
    return d;
}

unsigned from_digits(const Digits& d, unsigned p) {
    unsigned a = 0;
    for (auto it = d.rbegin(); it != d.rend(); ++it) a = a * p + *it;
    return a;
}

// Product of two elements of F_p[x]/(modulus), modulus monic of degree k given
// by its k lower coefficients.
unsigned poly_mul(unsigned a, unsigned b, unsigned p, unsigned k, const Digits& modulus) {
    const Digits da = to_digits(a, p, k), db = to_digits(b, p, k);
    Digits prod(2 * k, 0);
    for (unsigned i = 0; i < k; ++i)
        for (unsigned j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
    for (unsigned deg = 2 * k - 1; deg >= k; --deg) {
        const unsigned c = prod[deg];
        if (c == 0) continue;
        prod[deg] = 0;
        // x^k = -sum modulus[i] x^i
        for (unsigned i = 0; i < k; ++i)
            prod[deg - k + i] = (prod[deg - k + i] + (p - c) * modulus[i]) % p;
    }
    prod.resize(k);
    return from_digits(prod, p);
}

} // namespace

GaloisField::GaloisField(unsigned q) : q_(q) {
    const auto [p, k] = prime_power_decomposition(q);
    if (p == 0) throw Error(ErrorCode::invalid_argument, "q = " + std::to_string(q) + " is not a prime power");
    if (q > 256) throw Error(ErrorCode::capacity, "finite fields are limited to q <= 256");
    p_ = p;

    add_.resize(q * q);
    mul_.resize(q * q);
    neg_.resize(q);
    inv_.assign(q, 0);

    for (unsigned a = 0; a < q; ++a) {
        const Digits da = to_digits(a, p, k);
        Digits dn(k);
        for (unsigned i = 0; i < k; ++i) dn[i] = (p - da[i]) % p;
        neg_[a] = static_cast<std::uint8_t>(from_digits(dn, p));
        for (unsigned b = 0; b < q; ++b) {
            const Digits db = to_digits(b, p, k);
            Digits ds(k);
            for (unsigned i = 0; i < k; ++i) ds[i] = (da[i] + db[i]) % p;
            add_[a * q + b] = static_cast<std::uint8_t>(from_digits(ds, p));
        }
    }

    // Search for a monic irreducible modulus: the first candidate whose
    // multiplication table has no zero divisors.
    for (unsigned cand = 0; cand < q; ++cand) {
        const Digits modulus = to_digits(cand, p, k);
        bool field = true;
        for (unsigned a = 1; a < q && field; ++a) {
            bool has_inverse = false;
            for (unsigned b = 1; b < q; ++b) {
                const unsigned c = poly_mul(a, b, p, k, modulus);
                if (c == 0) {
                    field = false;
                    break;
                }
                if (c == 1) has_inverse = true;
            }
            field = field && has_inverse;
        }
        if (!field) continue;
        for (unsigned a = 0; a < q; ++a)
            for (unsigned b = 0; b < q; ++b) {
                const unsigned c = poly_mul(a, b, p, k, modulus);
                mul_[a * q + b] = static_cast<std::uint8_t>(c);
                if (c == 1) inv_[a] = static_cast<std::uint8_t>(b);
            }
        return;
    }
    throw Error(ErrorCode::invalid_argument, "no irreducible modulus found");
}

} // namespace periodlab
