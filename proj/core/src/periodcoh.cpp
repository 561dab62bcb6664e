#include "periodlab/periodcoh.hpp"

#include "periodlab/error.hpp"
#include "periodlab/finite_field.hpp"

#include <algorithm>
#include <map>

namespace periodlab {

namespace {

GaloisAction default_action(const RootDatum& rd, const Cocharacter& mu, const std::optional<GaloisAction>& g) {
    if (mu.rank() != rd.n()) throw Error(ErrorCode::invalid_argument, "mu has the wrong rank");
    const auto reps = kostant_representatives(rd, mu);
    if (!g) return GaloisAction::trivial(reps.size());
    if (g->size() != reps.size())
        throw Error(ErrorCode::invalid_argument, "Galois action has " + std::to_string(g->size()) + " entries but W^mu has " +
                                                     std::to_string(reps.size()));
    galois_orbits(reps, *g);  // rejects actions that change lengths
    return *g;
}

} // namespace

PeriodDatum::PeriodDatum(std::size_t n, Cocharacter mu_, Cocharacter nu_b_, long s_, std::optional<GaloisAction> g)
    : rd(n), mu(std::move(mu_)), nu_b(std::move(nu_b_)), s(s_), galois(default_action(rd, mu, g)) {
    if (nu_b.rank() != n) throw Error(ErrorCode::invalid_argument, "nu_b has the wrong rank");
    if (!is_basic(nu_b)) throw Error(ErrorCode::invalid_argument, "nu_b must be basic (central)");
    if (!is_decent(nu_b, s)) throw Error(ErrorCode::invalid_argument, "s * nu_b is not integral");
}

PeriodDatum PeriodDatum::drinfeld(std::size_t d) {
    if (d == 0) throw Error(ErrorCode::invalid_argument, "Drinfeld datum needs d >= 1");
    std::vector<Rational> mu(d + 1, Rational(-1));
    mu[0] = Rational(static_cast<long>(d));
    return PeriodDatum(d + 1, Cocharacter{std::move(mu)}, Cocharacter{std::vector<Rational>(d + 1)}, 1);
}

std::size_t flag_dimension(const RootDatum& rd, const Cocharacter& mu) {
    if (mu.rank() != rd.n()) throw Error(ErrorCode::invalid_argument, "mu has the wrong rank");
    return static_cast<std::size_t>(std::count_if(rd.positive_roots().begin(), rd.positive_roots().end(),
                                                  [&](const auto& a) { return !RootDatum::pair(a, mu.weights).is_zero(); }));
}

FlagDimensionDiagnostic flag_dimension_diagnostic(const RootDatum& rd, const Cocharacter& mu, const Cocharacter& nu_b) {
    if (nu_b.rank() != rd.n()) throw Error(ErrorCode::invalid_argument, "nu_b has the wrong rank");
    return {flag_dimension(rd, mu), RootDatum::pair(rd.two_rho(), nu_b.weights)};
}

RootMask i_set(const WeylElement& w, const Cocharacter& mu, const Cocharacter& nu_b, const RootDatum& rd) {
    if (nu_b.rank() != rd.n()) throw Error(ErrorCode::invalid_argument, "nu_b has the wrong rank");
    auto diff = w.act(mu).weights;
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= nu_b.weights[i];
    RootMask I = 0;
    const auto& om = rd.fundamental_coweights();
    for (std::size_t j = 0; j < om.size(); ++j)
        if (RootDatum::pair(diff, om[j]).sign() <= 0) I |= RootMask{1} << j;
    return I;
}

std::size_t steinberg_dimension(std::size_t n, unsigned q, RootMask I, std::optional<std::uint32_t> p) {
    const auto m = cached_flag_model(n, q);
    if (I > m->full_mask()) throw Error(ErrorCode::invalid_argument, root_set_str(I) + " is not a subset of Delta");
    const std::uint32_t mod = p ? *p : prime_power_decomposition(q).first;
    if (!is_prime(mod)) throw Error(ErrorCode::invalid_argument, "coefficient modulus " + std::to_string(mod) + " is not prime");
    // Rows: indicator functions of the fibres of X_I -> X_{I + alpha}. Their
    // span is the sum of the pullbacks from all strictly larger I'.
    std::size_t rows = 0;
    for (std::size_t a = 0; a + 1 < n; ++a)
        if (!(I >> a & 1u)) rows += m->size(I | RootMask{1} << a);
    SparseFpMatrix pull(rows, m->size(I), mod);
    std::size_t base = 0;
    for (std::size_t a = 0; a + 1 < n; ++a) {
        if (I >> a & 1u) continue;
        const RootMask J = I | RootMask{1} << a;
        const auto& proj = m->projection(I, J);
        for (std::size_t x = 0; x < proj.size(); ++x) pull.add(base + proj[x], x, 1);
        base += m->size(J);
    }
    return m->size(I) - rank_mod_p(pull);
}

std::string DegreeFunction::str() const {
    return "n = " + std::to_string(a) + "*l + " + std::to_string(b) + "*d + " + std::to_string(c);
}

CohomologyTable cohomology_table(const PeriodDatum& pd, const DegreeFunction& degf) {
    const auto reps = kostant_representatives(pd.rd, pd.mu);
    const auto orbits = galois_orbits(reps, pd.galois);
    CohomologyTable t;
    t.n = pd.rd.n();
    t.d = flag_dimension(pd.rd, pd.mu);
    const long d = static_cast<long>(t.d);
    for (std::size_t o = 0; o < orbits.size(); ++o) {
        const auto& w = reps[orbits[o].members.front()];
        CohomologySummand s;
        s.orbit_id = o;
        s.members = orbits[o].members;
        s.i_set = i_set(w, pd.mu, pd.nu_b, pd.rd);
        s.length = orbits[o].length;
        s.orbit_size = orbits[o].size();
        s.degree = 2 * d - degf(static_cast<long>(s.length), d);
        if (s.degree < 0 || s.degree > 2 * d)
            throw Error(ErrorCode::degree_out_of_range,
                        "orbit " + std::to_string(o) + " ([" + w.str() + "], l = " + std::to_string(s.length) +
                            ") gets degree " + std::to_string(s.degree) + " outside [0, " + std::to_string(2 * d) + "]");
        s.rho_twist = -static_cast<long>(s.length);
        s.overall_twist = d;
        s.description = "v*_{P_" + root_set_str(s.i_set) + "} ⊗ ρ*_{[" + w.str() + "]}";
        t.summands.push_back(std::move(s));
    }
    std::stable_sort(t.summands.begin(), t.summands.end(),
                     [](const auto& x, const auto& y) { return x.degree < y.degree; });
    t.caveats = {"assumes p >= 5", "assumes the period domain is nonempty"};
    return t;
}

RootMask steinberg_index(std::size_t d, std::size_t k) {
    if (k > d) throw Error(ErrorCode::invalid_argument, "St_k needs k <= d");
    return (RootMask{1} << (d - k)) - 1;
}

DegreeFunction calibrate_degree_function(const std::vector<PeriodDatum>& data) {
    if (data.empty()) throw Error(ErrorCode::calibration_ambiguous, "no data to calibrate against");
    struct Constraint {
        long l, d, n;
    };
    std::vector<Constraint> cons;
    for (const auto& pd : data) {
        const auto reps = kostant_representatives(pd.rd, pd.mu);
        const auto orbits = galois_orbits(reps, pd.galois);
        const long d = static_cast<long>(flag_dimension(pd.rd, pd.mu));
        for (const auto& o : orbits) {
            const long l = static_cast<long>(o.length);
            if (l > d)
                throw Error(ErrorCode::calibration_inconsistent,
                            "orbit of length " + std::to_string(l) + " exceeds d = " + std::to_string(d));
            // The St_k index only makes sense for GL_{d+1}.
            if (pd.rd.n() == static_cast<std::size_t>(d) + 1) {
                const auto want = steinberg_index(static_cast<std::size_t>(d), static_cast<std::size_t>(d - l));
                const auto got = i_set(reps[o.members.front()], pd.mu, pd.nu_b, pd.rd);
                if (want != got)
                    throw Error(ErrorCode::calibration_inconsistent,
                                "GL_" + std::to_string(pd.rd.n()) + " orbit of length " + std::to_string(l) +
                                    " has I-set " + root_set_str(got) + " but St_" + std::to_string(d - l) +
                                    " needs " + root_set_str(want));
            }
            // degree 2d - n must equal d - l
            cons.push_back({l, d, d + l});
        }
    }
    std::vector<DegreeFunction> found;
    for (long a = -kCalibrationRange; a <= kCalibrationRange; ++a)
        for (long b = -kCalibrationRange; b <= kCalibrationRange; ++b)
            for (long c = -kCalibrationRange; c <= kCalibrationRange; ++c) {
                const DegreeFunction f{a, b, c, "calibrated"};
                if (std::all_of(cons.begin(), cons.end(), [&](const Constraint& k) { return f(k.l, k.d) == k.n; }))
                    found.push_back(f);
            }
    if (found.empty())
        throw Error(ErrorCode::calibration_inconsistent,
                    "no rule a*l + b*d + c with |a|,|b|,|c| <= " + std::to_string(kCalibrationRange) +
                        " fits all " + std::to_string(cons.size()) + " constraints");
    if (found.size() > 1) {
        std::string msg = std::to_string(found.size()) + " rules fit (under-determined):";
        for (const auto& f : found) msg += " [" + f.str() + "]";
        throw Error(ErrorCode::calibration_ambiguous, msg);
    }
    return found.front();
}

DegreeFunction calibrate_degree_function(std::size_t n_max) {
    if (n_max < 2 || n_max > 4) throw Error(ErrorCode::invalid_argument, "n_max must be 2, 3 or 4");
    std::vector<PeriodDatum> data;
    for (std::size_t n = 2; n <= n_max; ++n) data.push_back(PeriodDatum::drinfeld(n - 1));
    return calibrate_degree_function(data);
}

DualityReport duality_report(const CohomologyTable& table, std::optional<unsigned> q) {
    DualityReport r;
    r.d = static_cast<long>(table.d);
    std::map<long, std::vector<const CohomologySummand*>> by_degree;
    std::map<long, std::size_t> image;
    for (const auto& s : table.summands) {
        by_degree[s.degree].push_back(&s);
        ++image[2 * r.d - s.degree];
    }
    long euler = 0;
    for (const auto& [k, list] : by_degree) {
        DualitySlot slot;
        slot.degree = k;
        slot.dual_degree = 2 * r.d - k;
        slot.summand_count = list.size();
        slot.dual_count = image[slot.dual_degree];
        slot.self_paired = slot.dual_degree == k;
        slot.dual_in_compact_range = slot.dual_degree >= r.d && slot.dual_degree <= 2 * r.d;
        for (const auto* s : list) {
            slot.i_sets.push_back(s->i_set);
            if (q) {
                const auto dim = steinberg_dimension(table.n, *q, s->i_set);
                slot.steinberg_dims.push_back(dim);
                euler += (k % 2 ? -1 : 1) * static_cast<long>(dim * s->orbit_size);
            }
        }
        r.counts_match = r.counts_match && slot.summand_count == slot.dual_count;
        r.compact_range_ok = r.compact_range_ok && slot.dual_in_compact_range;
        r.slots.push_back(std::move(slot));
    }
    if (q) r.euler_characteristic = euler;
    return r;
}

} // namespace periodlab
