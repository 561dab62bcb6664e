#include "cli.hpp"

#include "json_io.hpp"
#include "periodlab/error.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

namespace periodlab::cli {

namespace {

using io::Json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    bool json = false;
    bool tsv = false;
    std::string file;
    std::string input;
    unsigned height = 0;
    unsigned threads = 1;

    // shared subcommand arguments
    std::size_t n = 0;
    std::string mu, nu, galois, rule, coords, slopes, jumps, roots = "", selector = "full";
    long s = 1;
    unsigned q = 0;
    std::uint32_t p = 0;
    std::size_t n_max = 3;
    std::size_t coeff_dim = 1;
};

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(text);
    while (std::getline(is, cur, sep))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

std::vector<Rational> rational_list(const std::string& text) {
    std::vector<Rational> out;
    for (const auto& t : split(text, ',')) out.push_back(Rational::parse(t));
    return out;
}

Json load_input(const Options& o) {
    std::string text;
    if (!o.file.empty()) {
        std::ifstream f(o.file);
        if (!f) throw UsageError("cannot read " + o.file);
        std::stringstream ss;
        ss << f.rdbuf();
        text = ss.str();
    } else if (!o.input.empty()) {
        text = o.input;
    } else {
        throw UsageError("this subcommand needs --file or --input");
    }
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw Error(ErrorCode::parse_error, std::string("invalid JSON: ") + e.what());
    }
}

bool has_input(const Options& o) { return !o.file.empty() || !o.input.empty(); }

SearchConfig search_config(const Options& o) {
    return {o.height ? o.height : default_height_bound(), std::max(1u, o.threads)};
}

PeriodDatum datum(const Options& o) {
    if (has_input(o)) return io::period_datum_from_json(load_input(o));
    if (o.mu.empty()) throw UsageError("give a datum with --file/--input or --mu");
    const auto mu = rational_list(o.mu);
    const std::size_t n = o.n ? o.n : mu.size();
    const auto nu = o.nu.empty() ? std::vector<Rational>(n) : rational_list(o.nu);
    std::optional<GaloisAction> g;
    if (!o.galois.empty()) {
        std::vector<std::size_t> perm;
        for (const auto& t : split(o.galois, ',')) perm.push_back(std::stoul(t));
        g = GaloisAction(std::move(perm));
    }
    return PeriodDatum(n, Cocharacter{mu}, Cocharacter{nu}, o.s, std::move(g));
}

DegreeFunction degree_function(const Options& o) {
    if (o.rule.empty()) return calibrate_degree_function(3);
    const auto parts = split(o.rule, ',');
    if (parts.size() != 3) throw UsageError("--rule expects a,b,c");
    return {std::stol(parts[0]), std::stol(parts[1]), std::stol(parts[2]), "custom"};
}

std::string tsv_value(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

void emit_pairs(std::ostream& out, const Json& j) {
    for (const auto& [k, v] : j.items()) out << k << '\t' << tsv_value(v) << '\n';
}

void emit_table(std::ostream& out, const std::vector<std::string>& cols, const Json& rows) {
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "\t" : "") << cols[i];
    out << '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "\t" : "") << tsv_value(r.at(cols[i]));
        out << '\n';
    }
}

std::string verdict_name(Stability s) {
    switch (s) {
        case Stability::holds: return "holds";
        case Stability::nonzero_total_degree: return "nonzero_total_degree";
        case Stability::destabilizing_subspace: return "destabilizing_subspace";
    }
    return "unknown";
}

Json admissibility_json(const AdmissibilityVerdict& v) {
    Json j = {{"verdict", v.admissible ? "admissible" : "not_admissible"},
              {"reason", verdict_name(v.reason)},
              {"total_degree", io::to_json(v.total_degree)},
              {"height_bound", v.height_bound}};
    if (v.reason == Stability::destabilizing_subspace) {
        j["witness"] = io::to_json(v.witness);
        j["witness_degree"] = io::to_json(v.witness_degree);
    }
    return j;
}

// ------------------------------------------------------------ subcommands

void cmd_polygon(const Options& o, std::ostream& out) {
    Json j;
    if (!o.slopes.empty()) j["newton"] = io::to_json(polygon_from_slopes(rational_list(o.slopes)));
    if (!o.jumps.empty()) {
        std::vector<FiltrationJump> jt;
        for (const auto& t : split(o.jumps, ',')) {
            const auto parts = split(t, ':');
            if (parts.size() != 2) throw UsageError("--jumps expects jump:multiplicity,...");
            jt.push_back({Rational::parse(parts[0]), std::stoul(parts[1])});
        }
        j["hodge"] = io::to_json(hodge_polygon(jt));
    }
    if (has_input(o)) {
        const auto in = load_input(o);
        if (in.contains("matrix")) {
            const auto& rows = in.at("matrix");
            std::vector<std::vector<Rational>> m;
            for (const auto& r : rows) {
                std::vector<Rational> row;
                for (const auto& x : r) row.push_back(io::rational_from_json(x));
                m.push_back(std::move(row));
            }
            const std::size_t n = m.size();
            j["newton"] = io::to_json(newton_polygon_from_charpoly(
                Matrix<Rational>::from_rows(m, n, Rational()), in.at("p").get<unsigned long>()));
        } else {
            const auto fi = io::filtered_isocrystal_from_json(in);
            j["newton"] = io::to_json(fi.newton_polygon());
            j["hodge"] = io::to_json(fi.hodge_polygon());
        }
    }
    if (!j.contains("newton") && !j.contains("hodge")) throw UsageError("polygon needs --slopes, --jumps, --file or --input");
    if (j.contains("newton") && j.contains("hodge")) {
        const auto c = polygon_compare(io::polygon_from_json(j["newton"]), io::polygon_from_json(j["hodge"]));
        j["lies_on_or_above"] = c.lies_on_or_above;
        j["endpoints_equal"] = c.endpoints_equal;
    }
    if (!o.tsv) {
        out << j.dump(2) << '\n';
        return;
    }
    out << "polygon\tx\ty\n";
    for (const char* name : {"newton", "hodge"}) {
        if (!j.contains(name)) continue;
        const auto poly = io::polygon_from_json(j[name]);
        for (const auto& v : poly.vertices())
            out << name << '\t' << v.x.str() << '\t' << v.y.str() << '\n';
    }
    if (j.contains("lies_on_or_above"))
        out << "lies_on_or_above\t" << j["lies_on_or_above"].dump() << "\nendpoints_equal\t"
            << j["endpoints_equal"].dump() << '\n';
}

void cmd_admissible(const Options& o, std::ostream& out) {
    const auto fi = io::filtered_isocrystal_from_json(load_input(o));
    const auto j = admissibility_json(is_weakly_admissible(fi, search_config(o)));
    if (o.tsv) emit_pairs(out, j);
    else out << j.dump(2) << '\n';
}

void cmd_hn(const Options& o, std::ostream& out) {
    const auto fi = io::filtered_isocrystal_from_json(load_input(o));
    const auto rep = hn_filtration(fi, search_config(o));
    Json pieces = Json::array();
    for (std::size_t i = 0; i < rep.pieces.size(); ++i) {
        const auto& p = rep.pieces[i];
        pieces.push_back({{"index", i},
                          {"rank", p.rank},
                          {"degree", io::to_json(p.degree)},
                          {"slope", io::to_json(p.slope)},
                          {"basis", io::to_json(p.basis)}});
    }
    const auto inv = hn_invariants(fi);
    Json j = {{"rank", inv.rank}, {"degree", io::to_json(inv.degree)}, {"slope", io::to_json(inv.slope)},
              {"pieces", pieces}, {"height_bound", rep.height_bound}};
    if (o.tsv) emit_table(out, {"index", "rank", "degree", "slope"}, pieces);
    else out << j.dump(2) << '\n';
}

void cmd_drinfeld(const Options& o, std::ostream& out) {
    std::vector<std::string> coords;
    if (has_input(o)) {
        const auto in = load_input(o);
        if (!in.contains("coords")) throw Error(ErrorCode::parse_error, "missing field \"coords\"");
        for (const auto& c : in.at("coords")) coords.push_back(c.is_string() ? c.get<std::string>() : c.dump());
    } else {
        coords = split(o.coords, ',');
    }
    if (coords.size() < 2) throw UsageError("drinfeld needs at least two coordinates (--coords or coords in JSON)");
    std::size_t nvars = 1;
    for (const auto& c : coords) nvars = std::max(nvars, ModelFieldElement::variables_used(c));
    KVector v;
    for (const auto& c : coords) v.push_back(ModelFieldElement::parse(c, nvars));
    const bool member = drinfeld_membership(v);
    const auto fi = drinfeld_datum(v);
    const auto verdict = is_weakly_admissible(fi, search_config(o));
    Json j = {{"n", v.size()},
              {"membership", member},
              {"admissibility", admissibility_json(verdict)},
              {"agree", member == verdict.admissible},
              {"datum", io::to_json(fi)}};
    if (!o.tsv) {
        out << j.dump(2) << '\n';
        return;
    }
    out << "n\t" << v.size() << "\nmembership\t" << (member ? "true" : "false") << "\nverdict\t"
        << j["admissibility"]["verdict"].get<std::string>() << "\nagree\t" << j["agree"].dump() << '\n';
}

void cmd_kostant(const Options& o, std::ostream& out) {
    if (o.mu.empty()) throw UsageError("kostant needs --mu");
    const auto mu = rational_list(o.mu);
    const std::size_t n = o.n ? o.n : mu.size();
    if (n != mu.size()) throw Error(ErrorCode::invalid_argument, "--n does not match the length of --mu");
    const RootDatum rd(n);
    const Cocharacter m{mu};
    const Cocharacter nu{o.nu.empty() ? std::vector<Rational>(n) : rational_list(o.nu)};
    const auto reps = kostant_representatives(rd, m);
    Json rows = Json::array();
    for (std::size_t i = 0; i < reps.size(); ++i) {
        std::string wmu;
        for (const auto& x : reps[i].act(m).weights) wmu += (wmu.empty() ? "" : ",") + x.str();
        rows.push_back({{"index", i},
                        {"w", reps[i].str()},
                        {"length", reps[i].length()},
                        {"w_mu", wmu},
                        {"I_set", root_set_str(i_set(reps[i], m, nu, rd))}});
    }
    Json j = {{"n", n}, {"stabilizer_order", stabilizer(rd, m).size()}, {"representatives", rows}};
    if (o.tsv) emit_table(out, {"index", "w", "length", "w_mu", "I_set"}, rows);
    else out << j.dump(2) << '\n';
}

void cmd_cohomology(const Options& o, std::ostream& out) {
    const auto pd = datum(o);
    const auto degf = degree_function(o);
    const auto t = cohomology_table(pd, degf);
    auto j = io::to_json(t);
    if (o.tsv) {
        emit_table(out, {"degree", "I_set", "orbit_size", "l", "rho_twist", "overall_twist", "description"},
                   j["summands"]);
        return;
    }
    j["rule"] = {{"a", degf.a}, {"b", degf.b}, {"c", degf.c}, {"tag", degf.tag}};
    j["datum"] = io::to_json(pd);
    out << j.dump(2) << '\n';
}

void cmd_calibrate(const Options& o, std::ostream& out) {
    const auto f = calibrate_degree_function(o.n_max);
    Json j = {{"a", f.a}, {"b", f.b}, {"c", f.c}, {"tag", f.tag}, {"rule", f.str()}, {"n_max", o.n_max}};
    if (o.tsv) emit_pairs(out, j);
    else out << j.dump(2) << '\n';
}

void cmd_steinberg(const Options& o, std::ostream& out) {
    if (!o.n || !o.q) throw UsageError("steinberg-dim needs --n and --q");
    const auto I = io::root_mask_from_string(o.roots);
    const std::uint32_t p = o.p ? o.p : prime_power_decomposition(o.q).first;
    const auto dim = steinberg_dimension(o.n, o.q, I, p);
    Json j = {{"n", o.n}, {"q", o.q}, {"I", root_set_str(I)}, {"p", p}, {"dimension", dim},
              {"coset_count", cached_flag_model(o.n, o.q)->size(I)}};
    if (o.tsv) emit_pairs(out, j);
    else out << j.dump(2) << '\n';
}

StalkSelector selector(const FiniteFlagModel& m, const std::string& spec) {
    if (spec == "full") return StalkSelector::full(m);
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw UsageError("--selector expects full, singleton:<i> or flags:<i,j,...>");
    const auto kind = spec.substr(0, colon);
    std::vector<std::uint32_t> flags;
    for (const auto& t : split(spec.substr(colon + 1), ',')) flags.push_back(static_cast<std::uint32_t>(std::stoul(t)));
    if (kind == "singleton" && flags.size() == 1) return StalkSelector::singleton(m, flags.front());
    if (kind == "flags") return StalkSelector::generated_by(m, flags);
    throw UsageError("--selector expects full, singleton:<i> or flags:<i,j,...>");
}

void cmd_complex_check(const Options& o, std::ostream& out) {
    if (!o.n || !o.q) throw UsageError("complex-check needs --n and --q");
    const auto m = cached_flag_model(o.n, o.q);
    const auto sel = selector(*m, o.selector);
    const std::uint32_t p = o.p ? o.p : prime_power_decomposition(o.q).first;
    const auto c = assemble_fundamental_complex(*m, sel, o.coeff_dim, p);
    const auto h = homology_dims(c);
    std::vector<std::size_t> nonexact;
    for (std::size_t k = 0; k < h.size(); ++k)
        if (h[k]) nonexact.push_back(k);
    Json j = {{"dims", c.dims()},
              {"homology", h},
              {"exact_except", nonexact},
              {"d_squared_zero", c.squares_to_zero()},
              {"euler_characteristic", c.euler_characteristic()},
              {"e1", e1_page(*m, sel)},
              {"p", p}};
    if (!o.tsv) {
        out << j.dump(2) << '\n';
        return;
    }
    out << "degree\tdim\thomology\n";
    for (std::size_t k = 0; k < h.size(); ++k) out << k << '\t' << c.dims()[k] << '\t' << h[k] << '\n';
}

void cmd_duality(const Options& o, std::ostream& out) {
    const auto pd = datum(o);
    const auto t = cohomology_table(pd, degree_function(o));
    const auto r = duality_report(t, o.q ? std::optional<unsigned>(o.q) : std::nullopt);
    const auto j = io::to_json(r);
    if (!o.tsv) {
        out << j.dump(2) << '\n';
        return;
    }
    Json rows = j["slots"];
    for (auto& row : rows) {
        std::string s;
        for (const auto& x : row["I_sets"]) s += (s.empty() ? "" : ";") + x.get<std::string>();
        row["I_sets"] = s;
    }
    emit_table(out, {"degree", "dual_degree", "summand_count", "dual_count", "self_paired", "dual_in_compact_range",
                     "I_sets"},
               rows);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"periodlab: filtered isocrystals, period domain cohomology and fundamental complexes", "periodlab"};
    app.fallthrough();
    app.require_subcommand(1);
    Options o;
    auto* fmt = app.add_flag("--json", o.json, "JSON output (default)");
    app.add_flag("--tsv", o.tsv, "TSV output")->excludes(fmt);
    app.add_option("--file", o.file, "input JSON file");
    app.add_option("--input", o.input, "inline input JSON");
    app.add_option("--height", o.height, "height bound for subspace enumeration (default PERIODLAB_HEIGHT or 3)")
        ->check(CLI::Range(1u, 64u));
    app.add_option("--threads", o.threads, "worker threads for enumeration")->check(CLI::Range(1u, 256u));

    std::function<void(const Options&, std::ostream&)> action;
    const auto sub = [&](const char* name, const char* help, void (*fn)(const Options&, std::ostream&)) {
        auto* s = app.add_subcommand(name, help);
        s->callback([&action, fn] { action = fn; });
        return s;
    };

    auto* poly = sub("polygon", "Newton/Hodge polygons and their comparison", cmd_polygon);
    poly->add_option("--slopes", o.slopes, "slopes a,b/c,... for a Newton polygon");
    poly->add_option("--jumps", o.jumps, "jump:multiplicity,... for a Hodge polygon");
    sub("admissible", "weak admissibility of a filtered isocrystal", cmd_admissible);
    sub("hn", "Harder-Narasimhan filtration", cmd_hn);
    sub("drinfeld", "Drinfeld membership versus weak admissibility", cmd_drinfeld)
        ->add_option("--coords", o.coords, "projective coordinates, comma separated, in t1..tm");
    auto* kos = sub("kostant", "minimal coset representatives W^mu", cmd_kostant);
    for (auto* s : {kos, sub("cohomology", "cohomology summand table", cmd_cohomology),
                    sub("duality", "duality report for the cohomology table", cmd_duality)}) {
        s->add_option("--n", o.n, "rank of GL_n");
        s->add_option("--mu", o.mu, "dominant cocharacter, comma separated");
        s->add_option("--nu", o.nu, "basic slope cocharacter (default 0)");
        if (s != kos) {
            s->add_option("--s", o.s, "decency integer");
            s->add_option("--galois", o.galois, "permutation of W^mu indices, comma separated");
            s->add_option("--rule", o.rule, "degree rule a,b,c (default: calibrated)");
        }
    }
    app.get_subcommand("duality")->add_option("--q", o.q, "finite field size for Steinberg dimensions");
    sub("calibrate", "calibrate the degree rule on Drinfeld data", cmd_calibrate)
        ->add_option("--n-max", o.n_max, "largest GL_n used (2..4)");
    auto* st = sub("steinberg-dim", "dimension of a generalised Steinberg representation over F_q", cmd_steinberg);
    auto* cc = sub("complex-check", "assemble the fundamental complex and compute homology", cmd_complex_check);
    for (auto* s : {st, cc}) {
        s->add_option("--n", o.n, "rank of GL_n (2..4)");
        s->add_option("--q", o.q, "prime power q <= 9");
        s->add_option("--p", o.p, "coefficient prime (default: characteristic of q)");
    }
    st->add_option("--I", o.roots, "subset of simple roots, e.g. 1,3 or {a1,a3}");
    cc->add_option("--selector", o.selector, "full, singleton:<i> or flags:<i,j,...>");
    cc->add_option("--coeff-dim", o.coeff_dim, "dimension of the coefficient module");

    if (args.empty()) {
        err << app.help();
        return 2;
    }
    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::Success&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error[usage]: " << e.what() << '\n';
        return 2;
    }
    try {
        std::ostringstream buf;
        action(o, buf);
        out << buf.str();
        return 0;
    } catch (const UsageError& e) {
        err << "error[usage]: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "error[" << to_string(e.code()) << "]: " << e.what() << '\n';
        return 1;
    } catch (const Json::exception& e) {
        err << "error[parse_error]: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "error[usage]: bad number: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error[internal]: " << e.what() << '\n';
        return 1;
    }
}

} // namespace periodlab::cli
