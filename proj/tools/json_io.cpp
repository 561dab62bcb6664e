#include "json_io.hpp"

#include "periodlab/error.hpp"

#include <algorithm>

namespace periodlab::io {

namespace {

const Json& need(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        throw Error(ErrorCode::parse_error, std::string("missing field \"") + key + "\"");
    return j.at(key);
}

long to_long(const mpz_class& z) {
    if (!z.fits_slong_p()) throw Error(ErrorCode::capacity, "number too large for JSON output");
    return z.get_si();
}

std::vector<Rational> rationals(const Json& j, const char* what) {
    if (!j.is_array()) throw Error(ErrorCode::parse_error, std::string(what) + " must be an array");
    std::vector<Rational> out;
    for (const auto& x : j) out.push_back(rational_from_json(x));
    return out;
}

Json rationals_json(const std::vector<Rational>& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(to_json(x));
    return a;
}

std::size_t count_vars(const Json& flag) {
    std::size_t m = 0;
    for (const auto& step : flag)
        for (const auto& vec : need(step, "basis"))
            for (const auto& e : vec)
                if (e.is_string()) m = std::max(m, ModelFieldElement::variables_used(e.get<std::string>()));
    return std::max<std::size_t>(m, 1);
}

} // namespace

Rational rational_from_json(const Json& j) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    throw Error(ErrorCode::parse_error, "expected an integer or a \"a/b\" string, got " + j.dump());
}

Json to_json(const Rational& r) { return r.str(); }

Json to_json(const Polygon& p) {
    Json a = Json::array();
    for (const auto& v : p.vertices())
        a.push_back({to_long(v.x.numerator()), to_long(v.x.denominator()), to_long(v.y.numerator()),
                     to_long(v.y.denominator())});
    return a;
}

Polygon polygon_from_json(const Json& j) {
    if (!j.is_array()) throw Error(ErrorCode::parse_error, "polygon must be an array of [xn, xd, yn, yd]");
    std::vector<PolygonVertex> vs;
    for (const auto& v : j) {
        if (!v.is_array() || v.size() != 4) throw Error(ErrorCode::parse_error, "polygon vertex must be [xn, xd, yn, yd]");
        vs.push_back({Rational(v[0].get<long>(), v[1].get<long>()), Rational(v[2].get<long>(), v[3].get<long>())});
    }
    return Polygon(std::move(vs));
}

Json to_json(const FilteredIsocrystal& fi) {
    Json j;
    j["n"] = fi.rank();
    j["nvars"] = fi.nvars();
    j["slopes"] = rationals_json(fi.iso().slopes());
    Json flag = Json::array();
    for (const auto& step : fi.flag()) {
        Json basis = Json::array();
        for (const auto& v : step.basis) {
            Json vec = Json::array();
            for (const auto& x : v) vec.push_back(x.str());
            basis.push_back(std::move(vec));
        }
        flag.push_back({{"jump", to_json(step.jump)}, {"basis", std::move(basis)}});
    }
    j["flag"] = std::move(flag);
    return j;
}

FilteredIsocrystal filtered_isocrystal_from_json(const Json& j) {
    const auto slopes = rationals(need(j, "slopes"), "slopes");
    const std::size_t n = j.contains("n") ? j.at("n").get<std::size_t>() : slopes.size();
    if (n != slopes.size()) throw Error(ErrorCode::parse_error, "\"n\" does not match the number of slopes");
    const auto& flag_j = need(j, "flag");
    if (!flag_j.is_array()) throw Error(ErrorCode::parse_error, "flag must be an array");
    const std::size_t nvars = j.contains("nvars") ? j.at("nvars").get<std::size_t>() : count_vars(flag_j);
    std::vector<FlagStep> flag;
    for (const auto& step : flag_j) {
        FlagStep s{rational_from_json(need(step, "jump")), {}};
        for (const auto& vec : need(step, "basis")) {
            if (!vec.is_array() || vec.size() != n)
                throw Error(ErrorCode::parse_error, "basis vectors must have " + std::to_string(n) + " entries");
            KVector v;
            for (const auto& e : vec) {
                if (e.is_number_integer()) v.emplace_back(nvars, Rational(e.get<long>()));
                else if (e.is_string()) v.push_back(ModelFieldElement::parse(e.get<std::string>(), nvars));
                else throw Error(ErrorCode::parse_error, "basis entry must be a string or an integer");
            }
            s.basis.push_back(std::move(v));
        }
        flag.push_back(std::move(s));
    }
    return FilteredIsocrystal(Isocrystal(slopes), std::move(flag), nvars);
}

Json to_json(const PeriodDatum& pd) {
    Json j;
    j["n"] = pd.rd.n();
    j["mu"] = rationals_json(pd.mu.weights);
    j["nu_b"] = rationals_json(pd.nu_b.weights);
    j["s"] = pd.s;
    j["galois"] = pd.galois.permutation();
    return j;
}

PeriodDatum period_datum_from_json(const Json& j) {
    const auto mu = rationals(need(j, "mu"), "mu");
    const std::size_t n = j.contains("n") ? j.at("n").get<std::size_t>() : mu.size();
    const auto nu = j.contains("nu_b") ? rationals(j.at("nu_b"), "nu_b") : std::vector<Rational>(n);
    const long s = j.contains("s") ? j.at("s").get<long>() : 1;
    std::optional<GaloisAction> g;
    if (j.contains("galois")) g = GaloisAction(j.at("galois").get<std::vector<std::size_t>>());
    return PeriodDatum(n, Cocharacter{mu}, Cocharacter{nu}, s, std::move(g));
}

Json to_json(const std::vector<QVector>& basis) {
    Json a = Json::array();
    for (const auto& v : basis) a.push_back(rationals_json(v));
    return a;
}

Json to_json(const CohomologyTable& t) {
    Json rows = Json::array();
    for (const auto& s : t.summands)
        rows.push_back({{"degree", s.degree},
                        {"I_set", root_set_str(s.i_set)},
                        {"orbit_size", s.orbit_size},
                        {"l", s.length},
                        {"rho_twist", s.rho_twist},
                        {"overall_twist", s.overall_twist},
                        {"description", s.description},
                        {"orbit_id", s.orbit_id},
                        {"members", s.members}});
    return {{"n", t.n}, {"d", t.d}, {"summands", std::move(rows)}, {"caveats", t.caveats}};
}

Json to_json(const DualityReport& r) {
    Json slots = Json::array();
    for (const auto& s : r.slots) {
        Json isets = Json::array();
        for (auto m : s.i_sets) isets.push_back(root_set_str(m));
        Json slot = {{"degree", s.degree},
                     {"dual_degree", s.dual_degree},
                     {"summand_count", s.summand_count},
                     {"dual_count", s.dual_count},
                     {"self_paired", s.self_paired},
                     {"dual_in_compact_range", s.dual_in_compact_range},
                     {"I_sets", std::move(isets)}};
        if (!s.steinberg_dims.empty()) slot["steinberg_dims"] = s.steinberg_dims;
        slots.push_back(std::move(slot));
    }
    Json j = {{"d", r.d}, {"slots", std::move(slots)}, {"counts_match", r.counts_match},
              {"compact_range_ok", r.compact_range_ok}};
    if (r.euler_characteristic) j["euler_characteristic"] = *r.euler_characteristic;
    return j;
}

RootMask root_mask_from_string(const std::string& text) {
    RootMask m = 0;
    std::string tok;
    const auto flush = [&] {
        if (tok.empty()) return;
        std::size_t pos = tok.front() == 'a' ? 1 : 0;
        const auto digits = tok.substr(pos);
        if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit) || digits.size() > 2)
            throw Error(ErrorCode::parse_error, "bad simple root \"" + tok + "\"");
        const unsigned i = static_cast<unsigned>(std::stoul(digits));
        if (i == 0 || i > 31) throw Error(ErrorCode::parse_error, "simple root index out of range: " + tok);
        m |= RootMask{1} << (i - 1);
        tok.clear();
    };
    for (char c : text) {
        if (c == '{' || c == '}' || c == ' ') continue;
        if (c == ',') flush();
        else tok += c;
    }
    flush();
    return m;
}

} // namespace periodlab::io
