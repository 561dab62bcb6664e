#pragma once

#include "periodlab/rational.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace periodlab {

/// Cocharacter of the diagonal torus of GL_n, written as its n weights.
struct Cocharacter {
    std::vector<Rational> weights;

    std::size_t rank() const noexcept { return weights.size(); }
    bool is_dominant() const;  // weakly decreasing
    friend bool operator==(const Cocharacter&, const Cocharacter&) = default;
};

/// Element of W = S_n in one-line notation (0-based images).
class WeylElement {
public:
    explicit WeylElement(std::vector<std::size_t> images);
    static WeylElement identity(std::size_t n);

    const std::vector<std::size_t>& images() const noexcept { return images_; }
    std::size_t rank() const noexcept { return images_.size(); }
    /// Number of inversions.
    std::size_t length() const noexcept { return length_; }

    /// (w.mu)_{w(i)} = mu_i
    Cocharacter act(const Cocharacter& mu) const;
    WeylElement operator*(const WeylElement& o) const;  // (this o o)(i)
    WeylElement inverse() const;

    /// "1 2 3" style, 1-based.
    std::string str() const;

    friend bool operator==(const WeylElement& a, const WeylElement& b) { return a.images_ == b.images_; }
    friend auto operator<=>(const WeylElement& a, const WeylElement& b) { return a.images_ <=> b.images_; }

private:
    std::vector<std::size_t> images_;
    std::size_t length_ = 0;
};

/// Root datum of GL_n: simple roots alpha_i = e_i - e_{i+1}, the standard
/// inner product and trace-zero fundamental coweights with
/// (alpha_i, omega_j) = delta_ij.
class RootDatum {
public:
    explicit RootDatum(std::size_t n);

    std::size_t n() const noexcept { return n_; }
    std::size_t simple_root_count() const noexcept { return n_ == 0 ? 0 : n_ - 1; }
    const std::vector<std::vector<Rational>>& simple_roots() const noexcept { return simple_; }
    const std::vector<std::vector<Rational>>& positive_roots() const noexcept { return positive_; }
    const std::vector<std::vector<Rational>>& fundamental_coweights() const noexcept { return coweights_; }

    static Rational pair(const std::vector<Rational>& a, const std::vector<Rational>& b);

    /// sum of positive roots = 2 rho
    std::vector<Rational> two_rho() const;

private:
    std::size_t n_;
    std::vector<std::vector<Rational>> simple_;
    std::vector<std::vector<Rational>> positive_;
    std::vector<std::vector<Rational>> coweights_;
};

/// All n! elements sorted by (length, one-line notation). n <= 8.
std::vector<WeylElement> weyl_group(const RootDatum& rd);

/// Stab(mu) = {w : w.mu = mu}.
std::vector<WeylElement> stabilizer(const RootDatum& rd, const Cocharacter& mu);

/// Minimal-length representatives of W / Stab(mu), sorted by (length,
/// one-line notation). Rejects non-dominant mu with Error(not_dominant).
std::vector<WeylElement> kostant_representatives(const RootDatum& rd, const Cocharacter& mu);

/// Permutation g of the indices of a list of Kostant representatives.
class GaloisAction {
public:
    explicit GaloisAction(std::vector<std::size_t> permutation);
    static GaloisAction trivial(std::size_t size);

    const std::vector<std::size_t>& permutation() const noexcept { return perm_; }
    std::size_t size() const noexcept { return perm_.size(); }
    /// Smallest e >= 1 with g^e = id.
    std::size_t order() const;

    friend bool operator==(const GaloisAction&, const GaloisAction&) = default;

private:
    std::vector<std::size_t> perm_;
};

struct GaloisOrbit {
    std::vector<std::size_t> members;  // indices into reps, ascending
    std::size_t length = 0;
    std::size_t size() const noexcept { return members.size(); }
};

/// Orbits of g on reps, ordered by smallest member. Error(not_length_preserving)
/// names the first pair (i, g(i)) whose lengths differ.
std::vector<GaloisOrbit> galois_orbits(const std::vector<WeylElement>& reps, const GaloisAction& g);

/// First decency condition: s * nu_b is integral. Error(invalid_argument) if s == 0.
bool is_decent(const Cocharacter& nu_b, long s);

/// nu_b is central: all weights equal.
bool is_basic(const Cocharacter& nu_b);

} // namespace periodlab
