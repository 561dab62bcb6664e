#pragma once

#include <cstdint>
#include <utility>
#include <string>
#include <vector>

namespace periodlab {

/// Element of the prime field F_p. The modulus travels with the value so that
/// generic linear algebra can build zeros and ones from any entry.
class Fp {
public:
    Fp() = default;
    Fp(std::uint32_t value, std::uint32_t p) : v_(value % p), p_(p) {}

    std::uint32_t value() const noexcept { return v_; }
    std::uint32_t modulus() const noexcept { return p_; }
    bool is_zero() const noexcept { return v_ == 0; }

    Fp zero_like() const { return Fp(0, p_); }
    Fp one_like() const { return Fp(1, p_); }
    Fp inverse() const;

    Fp& operator+=(const Fp& o) { v_ = static_cast<std::uint32_t>((std::uint64_t{v_} + o.v_) % p_); return *this; }
    Fp& operator-=(const Fp& o) { v_ = static_cast<std::uint32_t>((std::uint64_t{v_} + p_ - o.v_) % p_); return *this; }
    Fp& operator*=(const Fp& o) { v_ = static_cast<std::uint32_t>((std::uint64_t{v_} * o.v_) % p_); return *this; }
    Fp& operator/=(const Fp& o) { return *this *= o.inverse(); }
    friend Fp operator+(Fp a, const Fp& b) { return a += b; }
    friend Fp operator-(Fp a, const Fp& b) { return a -= b; }
    friend Fp operator*(Fp a, const Fp& b) { return a *= b; }
    friend Fp operator/(Fp a, const Fp& b) { return a /= b; }
    Fp operator-() const { return Fp(v_ == 0 ? 0 : p_ - v_, p_); }

    friend bool operator==(const Fp& a, const Fp& b) { return a.v_ == b.v_ && a.p_ == b.p_; }

    std::string str() const { return std::to_string(v_); }

private:
    std::uint32_t v_ = 0;
    std::uint32_t p_ = 2;
};

/// Arithmetic tables for the finite field F_q, q = p^k, elements encoded as
/// 0..q-1 (base-p digits of the coefficient vector modulo a fixed
/// irreducible polynomial). Zero is 0 and one is 1.
class GaloisField {
public:
    /// Throws Error(invalid_argument) unless q is a prime power, and
    /// Error(capacity) if q > 256.
    explicit GaloisField(unsigned q);

    unsigned order() const noexcept { return q_; }
    unsigned characteristic() const noexcept { return p_; }

    std::uint8_t add(std::uint8_t a, std::uint8_t b) const { return add_[a * q_ + b]; }
    std::uint8_t sub(std::uint8_t a, std::uint8_t b) const { return add_[a * q_ + neg_[b]]; }
    std::uint8_t mul(std::uint8_t a, std::uint8_t b) const { return mul_[a * q_ + b]; }
    std::uint8_t neg(std::uint8_t a) const { return neg_[a]; }
    std::uint8_t inv(std::uint8_t a) const { return inv_[a]; }

private:
    unsigned q_;
    unsigned p_;
    std::vector<std::uint8_t> add_;
    std::vector<std::uint8_t> mul_;
    std::vector<std::uint8_t> neg_;
    std::vector<std::uint8_t> inv_;
};

/// Prime p and exponent k with q = p^k, or {0, 0} if q is not a prime power.
std::pair<unsigned, unsigned> prime_power_decomposition(unsigned q);

} // namespace periodlab
