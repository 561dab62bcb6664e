#include "periodlab/isocrystal.hpp"

#include "periodlab/error.hpp"

#include <algorithm>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

namespace periodlab {

namespace {

// Candidate-tuple budget per slope block before enumeration gives up.
constexpr double kMaxCandidateTuples = 5e6;

std::vector<QVector> echelon_q(const std::vector<QVector>& vectors, std::size_t n) {
    return echelon_basis<Rational>(vectors, n);
}

std::size_t rank_q(const std::vector<QVector>& vectors, std::size_t n) {
    if (vectors.empty()) return 0;
    return rank(Matrix<Rational>::from_rows(vectors, n));
}

std::size_t rank_k(const std::vector<KVector>& vectors, std::size_t n, std::size_t nvars) {
    if (vectors.empty()) return 0;
    return rank(Matrix<ModelFieldElement>::from_rows(vectors, n, ModelFieldElement(nvars)));
}

std::vector<KVector> echelon_k(const std::vector<KVector>& vectors, std::size_t n, std::size_t nvars) {
    if (vectors.empty()) return {};
    return echelon_basis<ModelFieldElement>(vectors, n, ModelFieldElement(nvars));
}

std::size_t leading_index(const QVector& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!v[i].is_zero()) return i;
    return v.size();
}

// v lies in the span of an echelon basis (reduced rows with pivots).
bool in_echelon_span(const std::vector<QVector>& echelon, const QVector& v) {
    QVector r = v;
    for (const auto& row : echelon) {
        const std::size_t piv = leading_index(row);
        if (r[piv].is_zero()) continue;
        const Rational c = r[piv];
        for (std::size_t j = piv; j < r.size(); ++j)
            if (!row[j].is_zero()) r[j] -= c * row[j];
    }
    return std::all_of(r.begin(), r.end(), [](const Rational& x) { return x.is_zero(); });
}

QVector project(const QVector& v, const std::vector<std::size_t>& block) {
    QVector p(v.size());
    for (auto i : block) p[i] = v[i];
    return p;
}

std::string describe(const QVector& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].str();
    return s + ")";
}

// Block-adapted basis of a phi-stable W: echelon bases of the projections to
// each slope block, merged and ordered by leading coordinate.
std::vector<QVector> adapted_basis(const Isocrystal& iso, const std::vector<QVector>& w_basis) {
    const std::size_t n = iso.rank();
    for (const auto& w : w_basis)
        if (w.size() != n) throw Error(ErrorCode::invalid_argument, "subspace vector has wrong length");
    const auto w_echelon = echelon_q(w_basis, n);
    const std::size_t m = w_echelon.size();
    const auto blocks = iso.blocks();

    for (const auto& w : w_basis)
        for (const auto& [slope, idx] : blocks) {
            const QVector p = project(w, idx);
            if (!in_echelon_span(w_echelon, p))
                throw Error(ErrorCode::not_phi_stable,
                            "subspace is not phi-stable: vector " + describe(w) + " mixes slopes");
        }

    std::vector<QVector> out;
    for (const auto& [slope, idx] : blocks) {
        std::vector<QVector> proj;
        for (const auto& w : w_echelon) proj.push_back(project(w, idx));
        for (auto& row : echelon_q(proj, n)) out.push_back(std::move(row));
    }
    if (out.size() != m) throw Error(ErrorCode::not_phi_stable, "subspace is not phi-stable");
    std::sort(out.begin(), out.end(),
              [](const QVector& a, const QVector& b) { return leading_index(a) < leading_index(b); });
    return out;
}

Rational newton_degree_of(const Isocrystal& iso, const std::vector<QVector>& adapted) {
    Rational sum;
    for (const auto& u : adapted) sum += iso.slopes()[leading_index(u)];
    return sum;
}

// ------------------------------------------------- flag-step precomputation

// A K-vector with its coefficient expansion: D * v = sum_m monomial_m * c_m,
// stored as the n x M rational matrix with columns c_m.
struct ExpandedVector {
    KVector v;
    Matrix<Rational> expansion;
};

ExpandedVector expand(KVector v) {
    Matrix<Rational> c = coefficient_matrix(std::span<const ModelFieldElement>(v));
    return {std::move(v), std::move(c)};
}

struct StepData {
    Rational jump;
    std::size_t dim = 0;
    std::vector<ExpandedVector> basis;
    std::vector<ExpandedVector> annihilator;
};

std::vector<StepData> prepare_steps(const FilteredIsocrystal& fi) {
    const std::size_t n = fi.rank();
    std::vector<StepData> steps;
    for (const auto& step : fi.flag()) {
        StepData s;
        s.jump = step.jump;
        s.dim = step.basis.size();
        for (const auto& f : step.basis) s.basis.push_back(expand(f));
        if (s.dim > 0 && s.dim < n) {
            const auto res = rref_rank_kernel(
                Matrix<ModelFieldElement>::from_rows(step.basis, n, ModelFieldElement(fi.nvars())));
            for (const auto& a : res.kernel_basis) s.annihilator.push_back(expand(a));
        }
        steps.push_back(std::move(s));
    }
    return steps;
}

bool row_kills(const QVector& x, const Matrix<Rational>& expansion) {
    for (std::size_t m = 0; m < expansion.cols(); ++m) {
        Rational acc;
        for (std::size_t j = 0; j < x.size(); ++j)
            if (!x[j].is_zero() && !expansion(j, m).is_zero()) acc += x[j] * expansion(j, m);
        if (!acc.is_zero()) return false;
    }
    return true;
}

// rank over K of X * [k_1 ... k_c] with X rational (rows) and k_l K-columns.
std::size_t product_rank(const std::vector<QVector>& rows, const std::vector<ExpandedVector>& cols,
                         std::size_t nvars) {
    if (rows.empty() || cols.empty()) return 0;
    if (cols.size() == 1) {
        for (const auto& x : rows)
            if (!row_kills(x, cols.front().expansion)) return 1;
        return 0;
    }
    if (rows.size() == 1) {
        for (const auto& c : cols)
            if (!row_kills(rows.front(), c.expansion)) return 1;
        return 0;
    }
    Matrix<ModelFieldElement> m(rows.size(), cols.size(), ModelFieldElement(nvars));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t l = 0; l < cols.size(); ++l) {
            ModelFieldElement acc(nvars);
            for (std::size_t j = 0; j < rows[i].size(); ++j)
                if (!rows[i][j].is_zero() && !cols[l].v[j].is_zero()) acc += cols[l].v[j].scaled(rows[i][j]);
            m(i, l) = acc;
        }
    return rank(m);
}

// dim (F cap W tensor K) for a rational W given by a basis and the basis of
// its annihilator.
std::size_t intersection_dim(const StepData& step, const std::vector<QVector>& w, const std::vector<QVector>& w_ann,
                             std::size_t n, std::size_t nvars) {
    const std::size_t a = step.dim;
    const std::size_t m = w.size();
    if (a == 0 || m == 0) return 0;
    if (a == n) return m;
    if (m == n) return a;
    const bool cheap_first = a == 1 || w_ann.size() == 1;
    const bool cheap_second = m == 1 || step.annihilator.size() == 1;
    if (!cheap_first && cheap_second) return m - product_rank(w, step.annihilator, nvars);
    return a - product_rank(w_ann, step.basis, nvars);
}

Rational hodge_degree_of(const std::vector<StepData>& steps, const std::vector<QVector>& w,
                         const std::vector<QVector>& w_ann, std::size_t n, std::size_t nvars) {
    Rational sum;
    std::size_t prev = 0;
    for (const auto& s : steps) {
        const std::size_t d = intersection_dim(s, w, w_ann, n, nvars);
        sum += s.jump * Rational(static_cast<long>(d - prev));
        prev = d;
    }
    return sum;
}

// ------------------------------------------------------ subspace catalogue

std::vector<QVector> primitive_vectors(std::size_t dim, unsigned h) {
    std::vector<QVector> out;
    std::vector<long> v(dim, -static_cast<long>(h));
    for (;;) {
        const auto first = std::find_if(v.begin(), v.end(), [](long x) { return x != 0; });
        if (first != v.end() && *first > 0) {
            long g = 0;
            for (auto x : v) g = std::gcd(g, std::labs(x));
            if (g == 1) {
                QVector q;
                for (auto x : v) q.emplace_back(x);
                out.push_back(std::move(q));
            }
        }
        std::size_t i = dim;
        while (i > 0) {
            --i;
            if (v[i] < static_cast<long>(h)) {
                ++v[i];
                break;
            }
            v[i] = -static_cast<long>(h);
            if (i == 0) return out;
        }
        if (dim == 0) return out;
    }
}

double binomial(std::size_t n, std::size_t k) {
    double r = 1;
    for (std::size_t i = 0; i < k; ++i) r = r * static_cast<double>(n - i) / static_cast<double>(i + 1);
    return r;
}

using Basis = std::vector<QVector>;

// Subspaces of Q^dim of dimension d spanned by vectors of height <= h.
std::vector<Basis> block_subspaces(std::size_t dim, std::size_t d, unsigned h, unsigned threads) {
    if (d == 0) return {Basis{}};
    if (d == dim) {
        Basis id;
        for (std::size_t i = 0; i < dim; ++i) {
            QVector e(dim);
            e[i] = Rational(1);
            id.push_back(std::move(e));
        }
        return {id};
    }
    const auto vecs = primitive_vectors(dim, h);
    if (binomial(vecs.size(), d) > kMaxCandidateTuples)
        throw Error(ErrorCode::capacity, "subspace enumeration too large: " + std::to_string(vecs.size()) +
                                             " vectors choose " + std::to_string(d) + " (lower the height bound)");

    const auto work = [&](std::size_t first_begin, std::size_t stride, std::set<Basis>& found) {
        std::vector<std::size_t> idx(d);
        // Depth-first over increasing index tuples whose vectors stay independent.
        const auto rec = [&](auto&& self, std::size_t depth, std::size_t start, Basis& partial) -> void {
            if (depth == d) {
                found.insert(echelon_q(partial, dim));
                return;
            }
            for (std::size_t i = start; i < vecs.size(); ++i) {
                partial.push_back(vecs[i]);
                if (rank_q(partial, dim) == partial.size()) self(self, depth + 1, i + 1, partial);
                partial.pop_back();
            }
        };
        for (std::size_t i = first_begin; i < vecs.size(); i += stride) {
            Basis partial{vecs[i]};
            rec(rec, 1, i + 1, partial);
        }
    };

    std::set<Basis> all;
    const unsigned nthreads = std::max(1u, threads);
    if (nthreads == 1) {
        work(0, 1, all);
    } else {
        std::vector<std::set<Basis>> partial(nthreads);
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(work, t, nthreads, std::ref(partial[t]));
        for (auto& th : pool) th.join();
        for (auto& s : partial) all.merge(s);
    }
    return {all.begin(), all.end()};
}

struct CatalogEntry {
    Basis basis;
    Basis annihilator;
    std::size_t dim = 0;
    Rational newton;
};

// All enumerated phi-stable subspaces of every dimension, ordered by
// (dimension, echelon basis).
struct Catalog {
    std::vector<CatalogEntry> entries;
};

std::shared_ptr<const Catalog> build_catalog(const Isocrystal& iso, unsigned h, unsigned threads) {
    const std::size_t n = iso.rank();
    const auto blocks = iso.blocks();
    std::vector<std::vector<std::size_t>> block_idx;
    std::vector<Rational> block_slope;
    for (const auto& [s, idx] : blocks) {
        block_slope.push_back(s);
        block_idx.push_back(idx);
    }
    const std::size_t nb = block_idx.size();

    // per block, per sub-dimension
    std::vector<std::vector<std::vector<Basis>>> lists(nb);
    for (std::size_t b = 0; b < nb; ++b)
        for (std::size_t d = 0; d <= block_idx[b].size(); ++d)
            lists[b].push_back(block_subspaces(block_idx[b].size(), d, h, threads));

    auto catalog = std::make_shared<Catalog>();
    for (std::size_t total = 0; total <= n; ++total) {
        std::vector<CatalogEntry> level;
        std::vector<std::size_t> dims(nb, 0);
        // iterate over compositions dims with sum == total
        const auto compose = [&](auto&& self, std::size_t b, std::size_t remaining) -> void {
            if (b == nb) {
                if (remaining != 0) return;
                std::vector<std::size_t> choice(nb, 0);
                for (;;) {
                    Basis embedded;
                    Rational newton;
                    for (std::size_t k = 0; k < nb; ++k) {
                        for (const auto& bv : lists[k][dims[k]][choice[k]]) {
                            QVector v(n);
                            for (std::size_t j = 0; j < bv.size(); ++j) v[block_idx[k][j]] = bv[j];
                            embedded.push_back(std::move(v));
                        }
                        newton += block_slope[k] * Rational(static_cast<long>(dims[k]));
                    }
                    CatalogEntry e;
                    e.dim = total;
                    e.newton = newton;
                    if (embedded.empty()) {
                        for (std::size_t i = 0; i < n; ++i) {
                            QVector u(n);
                            u[i] = Rational(1);
                            e.annihilator.push_back(std::move(u));
                        }
                    } else {
                        const auto res = rref_rank_kernel(Matrix<Rational>::from_rows(embedded, n));
                        for (std::size_t i = 0; i < res.rank; ++i) e.basis.push_back(res.rref.row(i));
                        e.annihilator = res.kernel_basis;
                    }
                    level.push_back(std::move(e));
                    std::size_t k = 0;
                    while (k < nb && ++choice[k] == lists[k][dims[k]].size()) choice[k++] = 0;
                    if (k == nb) return;
                }
            }
            for (std::size_t d = 0; d <= std::min(remaining, block_idx[b].size()); ++d) {
                dims[b] = d;
                self(self, b + 1, remaining - d);
            }
        };
        compose(compose, 0, total);
        std::sort(level.begin(), level.end(),
                  [](const CatalogEntry& a, const CatalogEntry& b) { return a.basis < b.basis; });
        for (auto& e : level) catalog->entries.push_back(std::move(e));
    }
    return catalog;
}

std::shared_ptr<const Catalog> catalog_for(const Isocrystal& iso, const SearchConfig& cfg) {
    if (cfg.height_bound < 1) throw Error(ErrorCode::invalid_argument, "height bound must be >= 1");
    if (!iso.has_integral_slopes())
        throw Error(ErrorCode::unsupported, "subspace enumeration requires integral slopes");
    static std::mutex mutex;
    static std::map<std::pair<std::vector<Rational>, unsigned>, std::shared_ptr<const Catalog>> cache;
    const auto key = std::make_pair(iso.slopes(), cfg.height_bound);
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    auto built = build_catalog(iso, cfg.height_bound, cfg.threads);
    std::lock_guard lock(mutex);
    if (cache.size() > 256) cache.clear();
    return cache.emplace(key, std::move(built)).first->second;
}

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    const unsigned nthreads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (nthreads == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(nthreads);
    for (unsigned t = 0; t < nthreads; ++t)
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < count; i += nthreads) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace

// ---------------------------------------------------------------- Isocrystal

Isocrystal::Isocrystal(std::vector<Rational> slopes) : slopes_(std::move(slopes)) {
    if (slopes_.empty()) throw Error(ErrorCode::invalid_argument, "isocrystal of rank 0");
    std::map<Rational, std::size_t> mult;
    for (const auto& s : slopes_) ++mult[s];
    for (const auto& [s, m] : mult) {
        const mpz_class den = s.denominator();
        if (mpz_class(static_cast<unsigned long>(m)) % den != 0)
            throw Error(ErrorCode::invalid_argument,
                        "slope " + s.str() + " occurs " + std::to_string(m) + " times, not a multiple of " +
                            den.get_str());
    }
}

bool Isocrystal::has_integral_slopes() const {
    return std::all_of(slopes_.begin(), slopes_.end(), [](const Rational& s) { return s.is_integer(); });
}

std::map<Rational, std::vector<std::size_t>> Isocrystal::blocks() const {
    std::map<Rational, std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < slopes_.size(); ++i) out[slopes_[i]].push_back(i);
    return out;
}

Rational Isocrystal::newton_degree() const {
    return std::accumulate(slopes_.begin(), slopes_.end(), Rational());
}

// -------------------------------------------------------- FilteredIsocrystal

FilteredIsocrystal::FilteredIsocrystal(Isocrystal iso, std::vector<FlagStep> flag, std::size_t nvars)
    : iso_(std::move(iso)), flag_(std::move(flag)), nvars_(nvars) {
    const std::size_t n = iso_.rank();
    if (flag_.empty()) throw Error(ErrorCode::invalid_argument, "empty flag");
    std::vector<KVector> prev;
    for (std::size_t k = 0; k < flag_.size(); ++k) {
        const auto& step = flag_[k];
        if (k > 0 && !(step.jump < flag_[k - 1].jump))
            throw Error(ErrorCode::invalid_argument, "flag jumps must be strictly decreasing");
        for (const auto& v : step.basis) {
            if (v.size() != n) throw Error(ErrorCode::invalid_argument, "flag vector has wrong length");
            for (const auto& x : v)
                if (x.nvars() != nvars_)
                    throw Error(ErrorCode::mismatched_variables, "flag entry over a different variable set");
        }
        if (rank_k(step.basis, n, nvars_) != step.basis.size())
            throw Error(ErrorCode::invalid_argument, "flag step basis at jump " + step.jump.str() + " is dependent");
        if (step.basis.size() <= prev.size())
            throw Error(ErrorCode::invalid_argument, "flag subspaces must strictly increase");
        std::vector<KVector> joined = prev;
        joined.insert(joined.end(), step.basis.begin(), step.basis.end());
        if (rank_k(joined, n, nvars_) != step.basis.size())
            throw Error(ErrorCode::invalid_argument, "flag step at jump " + step.jump.str() + " does not contain the previous step");
        prev = step.basis;
    }
    if (prev.size() != n) throw Error(ErrorCode::invalid_argument, "last flag step must be the whole space");
}

std::vector<FiltrationJump> FilteredIsocrystal::filtration_type() const {
    std::vector<FiltrationJump> out;
    std::size_t prev = 0;
    for (const auto& s : flag_) {
        out.push_back({s.jump, s.basis.size() - prev});
        prev = s.basis.size();
    }
    return out;
}

Rational FilteredIsocrystal::hodge_degree() const {
    Rational sum;
    for (const auto& [jump, mult] : filtration_type()) sum += jump * Rational(static_cast<long>(mult));
    return sum;
}

bool operator==(const FilteredIsocrystal& a, const FilteredIsocrystal& b) {
    if (!(a.iso_ == b.iso_) || a.nvars_ != b.nvars_ || a.flag_.size() != b.flag_.size()) return false;
    for (std::size_t k = 0; k < a.flag_.size(); ++k) {
        if (a.flag_[k].jump != b.flag_[k].jump) return false;
        if (echelon_k(a.flag_[k].basis, a.rank(), a.nvars_) != echelon_k(b.flag_[k].basis, b.rank(), b.nvars_))
            return false;
    }
    return true;
}

unsigned default_height_bound() {
    if (const char* env = std::getenv("PERIODLAB_HEIGHT")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1 && v <= 1000) return static_cast<unsigned>(v);
    }
    return 3;
}

// ------------------------------------------------------------- operations

HNInvariants hn_invariants(const FilteredIsocrystal& fi) {
    HNInvariants out;
    out.rank = fi.rank();
    out.degree = fi.hodge_degree() - fi.iso().newton_degree();
    out.slope = out.degree / Rational(static_cast<long>(out.rank));
    return out;
}

FilteredIsocrystal induced_sub(const FilteredIsocrystal& fi, const std::vector<QVector>& w_basis) {
    const std::size_t n = fi.rank();
    const std::size_t nvars = fi.nvars();
    const auto u = adapted_basis(fi.iso(), w_basis);
    const std::size_t m = u.size();
    if (m == 0) throw Error(ErrorCode::invalid_argument, "induced object on the zero subspace");

    std::vector<Rational> slopes;
    for (const auto& v : u) slopes.push_back(fi.iso().slopes()[leading_index(v)]);

    std::vector<FlagStep> flag;
    std::size_t prev = 0;
    for (const auto& step : fi.flag()) {
        const std::size_t a = step.basis.size();
        // columns: f_1..f_a, u_1..u_m; kernel vectors (x, y) give sum y_j u_j in F.
        Matrix<ModelFieldElement> cols(n, a + m, ModelFieldElement(nvars));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t l = 0; l < a; ++l) cols(i, l) = step.basis[l][i];
            for (std::size_t j = 0; j < m; ++j) cols(i, a + j) = ModelFieldElement(nvars, u[j][i]);
        }
        const auto res = rref_rank_kernel(cols);
        std::vector<KVector> coords;
        for (const auto& kv : res.kernel_basis) coords.emplace_back(kv.begin() + static_cast<std::ptrdiff_t>(a), kv.end());
        auto basis = echelon_k(coords, m, nvars);
        if (basis.size() > prev) {
            prev = basis.size();
            flag.push_back({step.jump, std::move(basis)});
        }
    }
    return FilteredIsocrystal(Isocrystal(std::move(slopes)), std::move(flag), nvars);
}

FilteredIsocrystal induced_quotient(const FilteredIsocrystal& fi, const std::vector<QVector>& w_basis) {
    const std::size_t n = fi.rank();
    const std::size_t nvars = fi.nvars();
    const auto u = adapted_basis(fi.iso(), w_basis);
    if (u.size() == n) throw Error(ErrorCode::invalid_argument, "quotient by the whole space");

    // Complement: standard vectors extending W inside each slope block.
    std::vector<QVector> complement;
    std::vector<QVector> span = u;
    for (std::size_t i = 0; i < n; ++i) {
        QVector e(n);
        e[i] = Rational(1);
        span.push_back(e);
        if (rank_q(span, n) == span.size())
            complement.push_back(std::move(e));
        else
            span.pop_back();
    }
    const std::size_t c = complement.size();

    // Change of basis: columns [u | complement]; quotient coordinates are the
    // last c rows of its inverse.
    Matrix<Rational> basis(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < u.size(); ++j) basis(i, j) = u[j][i];
        for (std::size_t j = 0; j < c; ++j) basis(i, u.size() + j) = complement[j][i];
    }
    Matrix<Rational> aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = basis(i, j);
        aug(i, n + i) = Rational(1);
    }
    const auto inv = rref_rank_kernel(aug).rref;

    std::vector<Rational> slopes;
    for (const auto& e : complement) slopes.push_back(fi.iso().slopes()[leading_index(e)]);

    std::vector<FlagStep> flag;
    std::size_t prev = 0;
    for (const auto& step : fi.flag()) {
        std::vector<KVector> images;
        for (const auto& f : step.basis) {
            KVector img(c, ModelFieldElement(nvars));
            for (std::size_t r = 0; r < c; ++r)
                for (std::size_t j = 0; j < n; ++j) {
                    const Rational& coef = inv(u.size() + r, n + j);
                    if (!coef.is_zero() && !f[j].is_zero()) img[r] += f[j].scaled(coef);
                }
            images.push_back(std::move(img));
        }
        auto b = echelon_k(images, c, nvars);
        if (b.size() > prev) {
            prev = b.size();
            flag.push_back({step.jump, std::move(b)});
        }
    }
    return FilteredIsocrystal(Isocrystal(std::move(slopes)), std::move(flag), nvars);
}

FilteredIsocrystal tensor_product(const FilteredIsocrystal& a, const FilteredIsocrystal& b) {
    if (a.nvars() != b.nvars())
        throw Error(ErrorCode::mismatched_variables, "tensor factors over different model fields");
    const std::size_t na = a.rank(), nb = b.rank(), n = na * nb, nvars = a.nvars();
    std::vector<Rational> slopes;
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j) slopes.push_back(a.iso().slopes()[i] + b.iso().slopes()[j]);

    std::set<Rational> sums;
    for (const auto& sa : a.flag())
        for (const auto& sb : b.flag()) sums.insert(sa.jump + sb.jump);

    std::vector<FlagStep> flag;
    std::size_t prev = 0;
    for (auto it = sums.rbegin(); it != sums.rend(); ++it) {
        std::vector<KVector> gens;
        for (const auto& sa : a.flag())
            for (const auto& sb : b.flag()) {
                if (sa.jump + sb.jump < *it) continue;
                for (const auto& x : sa.basis)
                    for (const auto& y : sb.basis) {
                        KVector v;
                        v.reserve(n);
                        for (std::size_t i = 0; i < na; ++i)
                            for (std::size_t j = 0; j < nb; ++j) v.push_back(x[i] * y[j]);
                        gens.push_back(std::move(v));
                    }
            }
        auto basis = echelon_k(gens, n, nvars);
        if (basis.size() > prev) {
            prev = basis.size();
            flag.push_back({*it, std::move(basis)});
        }
    }
    return FilteredIsocrystal(Isocrystal(std::move(slopes)), std::move(flag), nvars);
}

FilteredIsocrystal drinfeld_datum(const KVector& coords) {
    const std::size_t n = coords.size();
    if (n < 2) throw Error(ErrorCode::invalid_argument, "Drinfeld datum needs n >= 2");
    const std::size_t nvars = coords.front().nvars();
    std::vector<KVector> full;
    for (std::size_t i = 0; i < n; ++i) {
        KVector e(n, ModelFieldElement(nvars));
        e[i] = ModelFieldElement(nvars, Rational(1));
        full.push_back(std::move(e));
    }
    std::vector<FlagStep> flag{{Rational(static_cast<long>(n) - 1), {coords}}, {Rational(-1), std::move(full)}};
    return FilteredIsocrystal(Isocrystal(std::vector<Rational>(n, Rational())), std::move(flag), nvars);
}

std::vector<std::vector<QVector>> enumerate_phi_stable_subspaces(const Isocrystal& iso, std::size_t dim,
                                                                 const SearchConfig& cfg) {
    if (dim > iso.rank()) throw Error(ErrorCode::invalid_argument, "subspace dimension exceeds rank");
    const auto catalog = catalog_for(iso, cfg);
    std::vector<std::vector<QVector>> out;
    for (const auto& e : catalog->entries)
        if (e.dim == dim) out.push_back(e.basis);
    return out;
}

std::vector<SubspaceDegree> subspace_degrees(const FilteredIsocrystal& fi, const SearchConfig& cfg) {
    const auto catalog = catalog_for(fi.iso(), cfg);
    const auto steps = prepare_steps(fi);
    const std::size_t n = fi.rank();
    std::vector<SubspaceDegree> out(catalog->entries.size());
    parallel_for(catalog->entries.size(), cfg.threads, [&](std::size_t i) {
        const auto& e = catalog->entries[i];
        out[i].basis = e.basis;
        out[i].rank = e.dim;
        out[i].degree = hodge_degree_of(steps, e.basis, e.annihilator, n, fi.nvars()) - e.newton;
    });
    return out;
}

Rational induced_degree(const FilteredIsocrystal& fi, const std::vector<QVector>& w_basis) {
    const std::size_t n = fi.rank();
    const auto u = adapted_basis(fi.iso(), w_basis);
    if (u.empty()) return Rational();
    const auto res = rref_rank_kernel(Matrix<Rational>::from_rows(u, n));
    const auto steps = prepare_steps(fi);
    return hodge_degree_of(steps, u, res.kernel_basis, n, fi.nvars()) - newton_degree_of(fi.iso(), u);
}

AdmissibilityVerdict is_weakly_admissible(const FilteredIsocrystal& fi, const SearchConfig& cfg) {
    if (!fi.iso().has_integral_slopes())
        throw Error(ErrorCode::unsupported, "weak admissibility check requires integral slopes");
    AdmissibilityVerdict v;
    v.height_bound = cfg.height_bound;
    v.total_degree = hn_invariants(fi).degree;
    if (!v.total_degree.is_zero()) {
        v.reason = Stability::nonzero_total_degree;
        return v;
    }
    const auto degrees = subspace_degrees(fi, cfg);
    const SubspaceDegree* worst = nullptr;
    for (const auto& d : degrees) {
        if (d.rank == 0 || d.rank == fi.rank()) continue;
        if (d.degree > Rational() && (!worst || d.degree > worst->degree)) worst = &d;
    }
    if (worst) {
        v.reason = Stability::destabilizing_subspace;
        v.witness = worst->basis;
        v.witness_degree = worst->degree;
        return v;
    }
    v.admissible = true;
    return v;
}

SemistabilityVerdict is_semistable(const FilteredIsocrystal& fi, const SearchConfig& cfg) {
    SemistabilityVerdict v;
    v.height_bound = cfg.height_bound;
    v.slope = hn_invariants(fi).slope;
    const auto degrees = subspace_degrees(fi, cfg);
    const SubspaceDegree* worst = nullptr;
    Rational worst_slope;
    for (const auto& d : degrees) {
        if (d.rank == 0 || d.rank == fi.rank()) continue;
        const Rational s = d.degree / Rational(static_cast<long>(d.rank));
        if (s > v.slope && (!worst || s > worst_slope)) {
            worst = &d;
            worst_slope = s;
        }
    }
    v.semistable = worst == nullptr;
    if (worst) {
        v.witness = worst->basis;
        v.witness_slope = worst_slope;
    }
    return v;
}

HNReport hn_filtration(const FilteredIsocrystal& fi, const SearchConfig& cfg) {
    const std::size_t n = fi.rank();
    const auto degrees = subspace_degrees(fi, cfg);
    HNReport report;
    report.height_bound = cfg.height_bound;

    std::vector<QVector> prev_basis;
    std::size_t prev_rank = 0;
    Rational prev_degree;
    while (prev_rank < n) {
        const SubspaceDegree* best = nullptr;
        Rational best_slope;
        for (const auto& d : degrees) {
            if (d.rank <= prev_rank) continue;
            if (!std::all_of(prev_basis.begin(), prev_basis.end(),
                             [&](const QVector& v) { return in_echelon_span(d.basis, v); }))
                continue;
            const Rational s = (d.degree - prev_degree) / Rational(static_cast<long>(d.rank - prev_rank));
            // entries come ordered by (rank, basis): a later entry wins only on
            // a strictly larger slope or an equal slope with larger rank.
            if (!best || s > best_slope || (s == best_slope && d.rank > best->rank)) {
                best = &d;
                best_slope = s;
            }
        }
        if (!best) throw Error(ErrorCode::invalid_argument, "no subspace extends the current HN piece");
        report.pieces.push_back({best->basis, best->rank - prev_rank, best->degree - prev_degree, best_slope});
        prev_basis = best->basis;
        prev_rank = best->rank;
        prev_degree = best->degree;
    }
    return report;
}

bool drinfeld_membership(const KVector& coords) {
    if (std::all_of(coords.begin(), coords.end(), [](const ModelFieldElement& x) { return x.is_zero(); }))
        throw Error(ErrorCode::invalid_argument, "the zero vector is not a point of projective space");
    const auto c = coefficient_matrix(std::span<const ModelFieldElement>(coords));
    return rank(c) == coords.size();
}

} // namespace periodlab
