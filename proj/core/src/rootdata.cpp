#include "periodlab/rootdata.hpp"

#include "periodlab/error.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace periodlab {

bool Cocharacter::is_dominant() const {
    for (std::size_t i = 1; i < weights.size(); ++i)
        if (weights[i] > weights[i - 1]) return false;
    return true;
}

WeylElement::WeylElement(std::vector<std::size_t> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size(), false);
    for (auto x : images_) {
        if (x >= images_.size() || seen[x]) throw Error(ErrorCode::invalid_argument, "not a permutation");
        seen[x] = true;
    }
    for (std::size_t i = 0; i < images_.size(); ++i)
        for (std::size_t j = i + 1; j < images_.size(); ++j)
            if (images_[i] > images_[j]) ++length_;
}

WeylElement WeylElement::identity(std::size_t n) {
    std::vector<std::size_t> id(n);
    std::iota(id.begin(), id.end(), 0);
    return WeylElement(std::move(id));
}

Cocharacter WeylElement::act(const Cocharacter& mu) const {
    if (mu.rank() != rank()) throw Error(ErrorCode::invalid_argument, "cocharacter rank mismatch");
    Cocharacter out{std::vector<Rational>(rank())};
    for (std::size_t i = 0; i < rank(); ++i) out.weights[images_[i]] = mu.weights[i];
    return out;
}

WeylElement WeylElement::operator*(const WeylElement& o) const {
    if (o.rank() != rank()) throw Error(ErrorCode::invalid_argument, "Weyl element rank mismatch");
    std::vector<std::size_t> r(rank());
    for (std::size_t i = 0; i < rank(); ++i) r[i] = images_[o.images_[i]];
    return WeylElement(std::move(r));
}

WeylElement WeylElement::inverse() const {
    std::vector<std::size_t> r(rank());
    for (std::size_t i = 0; i < rank(); ++i) r[images_[i]] = i;
    return WeylElement(std::move(r));
}

std::string WeylElement::str() const {
    std::string s;
    for (std::size_t i = 0; i < images_.size(); ++i) s += (i ? " " : "") + std::to_string(images_[i] + 1);
    return s;
}

RootDatum::RootDatum(std::size_t n) : n_(n) {
    if (n == 0) throw Error(ErrorCode::invalid_argument, "GL_0 has no root datum");
    const auto basis_diff = [n](std::size_t i, std::size_t j) {
        std::vector<Rational> v(n);
        v[i] = Rational(1);
        v[j] = Rational(-1);
        return v;
    };
    for (std::size_t i = 0; i + 1 < n; ++i) simple_.push_back(basis_diff(i, i + 1));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) positive_.push_back(basis_diff(i, j));
    // omega_j = (1,..,1,0,..,0) - (j/n)(1,..,1), j ones
    for (std::size_t j = 1; j < n; ++j) {
        std::vector<Rational> w(n);
        const Rational shift(static_cast<long>(j), static_cast<long>(n));
        for (std::size_t i = 0; i < n; ++i) w[i] = (i < j ? Rational(1) : Rational()) - shift;
        coweights_.push_back(std::move(w));
    }
}

Rational RootDatum::pair(const std::vector<Rational>& a, const std::vector<Rational>& b) {
    if (a.size() != b.size()) throw Error(ErrorCode::invalid_argument, "pairing of vectors of different length");
    Rational s;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

std::vector<Rational> RootDatum::two_rho() const {
    std::vector<Rational> r(n_);
    for (const auto& a : positive_)
        for (std::size_t i = 0; i < n_; ++i) r[i] += a[i];
    return r;
}

std::vector<WeylElement> weyl_group(const RootDatum& rd) {
    if (rd.n() > 8) throw Error(ErrorCode::capacity, "Weyl group enumeration is limited to n <= 8");
    std::vector<std::size_t> p(rd.n());
    std::iota(p.begin(), p.end(), 0);
    std::vector<WeylElement> out;
    do {
        out.emplace_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    std::stable_sort(out.begin(), out.end(),
                     [](const WeylElement& a, const WeylElement& b) { return a.length() < b.length(); });
    return out;
}

std::vector<WeylElement> stabilizer(const RootDatum& rd, const Cocharacter& mu) {
    std::vector<WeylElement> out;
    for (const auto& w : weyl_group(rd))
        if (w.act(mu) == mu) out.push_back(w);
    return out;
}

std::vector<WeylElement> kostant_representatives(const RootDatum& rd, const Cocharacter& mu) {
    if (mu.rank() != rd.n()) throw Error(ErrorCode::invalid_argument, "cocharacter rank mismatch");
    if (!mu.is_dominant()) throw Error(ErrorCode::not_dominant, "mu must be dominant (weakly decreasing)");
    // The coset w.Stab(mu) is determined by w.mu; weyl_group is length-sorted,
    // so the first element reaching each w.mu is the minimal one.
    std::map<std::vector<Rational>, std::size_t> seen;
    std::vector<WeylElement> out;
    for (const auto& w : weyl_group(rd)) {
        auto [it, inserted] = seen.try_emplace(w.act(mu).weights, out.size());
        if (inserted) out.push_back(w);
    }
    return out;
}

GaloisAction::GaloisAction(std::vector<std::size_t> permutation) : perm_(std::move(permutation)) {
    std::vector<bool> seen(perm_.size(), false);
    for (auto x : perm_) {
        if (x >= perm_.size() || seen[x]) throw Error(ErrorCode::invalid_argument, "Galois action is not a permutation");
        seen[x] = true;
    }
}

GaloisAction GaloisAction::trivial(std::size_t size) {
    std::vector<std::size_t> id(size);
    std::iota(id.begin(), id.end(), 0);
    return GaloisAction(std::move(id));
}

std::size_t GaloisAction::order() const {
    std::size_t e = 1;
    std::vector<bool> done(perm_.size(), false);
    for (std::size_t i = 0; i < perm_.size(); ++i) {
        if (done[i]) continue;
        std::size_t len = 0;
        for (std::size_t j = i; !done[j]; j = perm_[j]) {
            done[j] = true;
            ++len;
        }
        e = std::lcm(e, len);
    }
    return e;
}

std::vector<GaloisOrbit> galois_orbits(const std::vector<WeylElement>& reps, const GaloisAction& g) {
    if (g.size() != reps.size())
        throw Error(ErrorCode::invalid_argument, "Galois action size does not match the representatives");
    const auto& perm = g.permutation();
    for (std::size_t i = 0; i < reps.size(); ++i)
        if (reps[i].length() != reps[perm[i]].length())
            throw Error(ErrorCode::not_length_preserving,
                        "Galois action maps " + std::to_string(i) + " (length " + std::to_string(reps[i].length()) +
                            ") to " + std::to_string(perm[i]) + " (length " +
                            std::to_string(reps[perm[i]].length()) + ")");
    std::vector<GaloisOrbit> out;
    std::vector<bool> done(reps.size(), false);
    for (std::size_t i = 0; i < reps.size(); ++i) {
        if (done[i]) continue;
        GaloisOrbit o;
        for (std::size_t j = i; !done[j]; j = perm[j]) {
            done[j] = true;
            o.members.push_back(j);
        }
        std::sort(o.members.begin(), o.members.end());
        o.length = reps[i].length();
        out.push_back(std::move(o));
    }
    return out;
}

bool is_decent(const Cocharacter& nu_b, long s) {
    if (s <= 0) throw Error(ErrorCode::invalid_argument, "decency integer must be positive");
    return std::all_of(nu_b.weights.begin(), nu_b.weights.end(),
                       [s](const Rational& x) { return (x * Rational(s)).is_integer(); });
}

bool is_basic(const Cocharacter& nu_b) {
    return std::adjacent_find(nu_b.weights.begin(), nu_b.weights.end(), std::not_equal_to<>()) == nu_b.weights.end();
}

} // namespace periodlab
