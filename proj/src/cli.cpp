#include "idensity/cli.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "idensity/coding.hpp"
#include "idensity/constructions.hpp"
#include "idensity/density.hpp"
#include "idensity/errors.hpp"
#include "idensity/function_table.hpp"
#include "idensity/sampler.hpp"
#include "idensity/set_stream.hpp"
#include "idensity/weakrep.hpp"

namespace idensity::cli {

namespace {

using json = nlohmann::ordered_json;

struct Check {
    std::string name;
    bool pass = true;
    std::string detail;
};

// Everything one subcommand produces. `columns`/`rows` are the CSV view.
struct Report {
    json parameters = json::object();
    json horizons = json::object();
    json results = json::object();
    std::vector<Check> checks;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void check(std::string name, bool pass, std::string detail = {}) {
        checks.push_back({std::move(name), pass, std::move(detail)});
    }
    bool all_pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    }
};

// Raw flag values, shared by all subcommands.
struct Options {
    std::string format = "json";
    bool timing = false;

    std::string set_spec;
    std::string sampler_spec;
    std::string f_spec;
    std::string big_f_spec = "pow2";
    std::string g_spec;
    std::string horizon = "1000000";
    std::string domain = "1000000";
    std::string checkpoints;
    std::string codes;
    std::string trace_file;
    std::string export_path;
    std::string manifest;
    std::string eof;
    std::string table;
    std::string sigma;
    std::string elems;
    std::string x, y, z, n, code;

    std::uint64_t count = 8;
    std::uint64_t q = 1;
    std::uint64_t full_height = 0;
    std::uint64_t depth = 8;
    std::uint64_t nmax = 5;
    std::uint64_t index = 0;
    std::uint64_t inputs = 16;
    std::uint64_t length = 64;
    bool oracle_trace = false;
};

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

json naturals(const FiniteSet& s) {
    json arr = json::array();
    for (const Natural& v : s) arr.push_back(v.str());
    return arr;
}

std::string joined(const FiniteSet& s) {
    std::vector<std::string> parts;
    for (const Natural& v : s) parts.push_back(v.str());
    return join(parts, ";");
}

std::vector<Natural> parse_list(const std::string& text, const std::string& flag) {
    try {
        return parse_natural_csv(text);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument(flag + ": expected comma-separated naturals, got '" + text + "'");
    }
}

Natural natural_flag(const std::string& text, const std::string& flag) {
    try {
        return parse_natural(text);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument(flag + ": expected a natural number, got '" + text + "'");
    }
}

SetStream set_flag(const Options& o) {
    if (o.set_spec.empty()) throw std::invalid_argument("--set is required");
    return SetStream::parse(o.set_spec, natural_flag(o.horizon, "--horizon"));
}

Sampler sampler_flag(const Options& o) {
    return Sampler::parse(o.sampler_spec.empty() ? "identity" : o.sampler_spec, natural_flag(o.domain, "--domain"));
}

json sampler_json(const Sampler& s) {
    return json{{"name", s.name()}, {"kind", to_string(s.kind())}, {"domain_bound", s.domain_bound().str()}};
}

// ---------------------------------------------------------------------------

Report cmd_density(const Options& o) {
    Report r;
    const auto s = set_flag(o);
    const auto checkpoints = parse_list(o.checkpoints, "--checkpoints");
    const auto profile = density_profile(s, checkpoints);
    const auto comp = density_profile(complement(s), checkpoints);

    r.parameters = {{"set", s.spec()}, {"checkpoints", json::array()}};
    for (const auto& c : checkpoints) r.parameters["checkpoints"].push_back(c.str());
    r.horizons["set"] = s.horizon().str();

    json values = json::array();
    r.columns = {"checkpoint", "count", "density"};
    bool sums = true;
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        values.push_back(to_string(profile.values[i]));
        const Natural count = boost::multiprecision::numerator(Rational(profile.values[i] * checkpoints[i]));
        r.rows.push_back({checkpoints[i].str(), count.str(), to_string(profile.values[i])});
        sums = sums && profile.values[i] + comp.values[i] == 1;
    }
    r.results = {{"values", values},
                 {"observed_sup", to_string(profile.observed_sup)},
                 {"observed_inf", to_string(profile.observed_inf)}};
    r.check("density_plus_complement_is_one", sums);
    return r;
}

Report cmd_prefix_set(const Options& o) {
    Report r;
    const auto a = set_flag(o);
    const auto ps = prefix_set(a);
    r.parameters = {{"set", a.spec()}, {"count", o.count}};
    r.horizons = {{"set", a.horizon().str()}, {"prefix_set", ps.horizon().str()}};

    // Members in increasing order are the codes of A|0, A|1, ...
    json members = json::array();
    r.columns = {"length", "code", "prefix"};
    bool ok = true;
    for (std::uint64_t k = 0; k < o.count; ++k) {
        const BitString prefix = restriction(a, k);
        const Natural c = string_code(prefix);
        ok = ok && ps.contains(c) && string_decode(c) == prefix;
        members.push_back({{"length", k}, {"code", c.str()}, {"prefix", prefix.str()}});
        r.rows.push_back({std::to_string(k), c.str(), prefix.str()});
    }
    r.results = {{"members", members}};
    r.check("members_decode_to_prefixes", ok);
    return r;
}

Report cmd_tree_decode(const Options& o) {
    Report r;
    const auto a = set_flag(o);
    const bool enumerate_prefixes = o.sampler_spec.empty() || o.sampler_spec == "prefixes";
    const Sampler s = enumerate_prefixes ? prefix_enumerator(a) : sampler_flag(o);
    const Natural q = o.q;
    const auto tree = build_prefix_tree(s, q, o.full_height, o.depth);
    const auto candidates = extract_candidates(tree);

    r.parameters = {{"set", a.spec()},     {"sampler", sampler_json(s)}, {"q", o.q},
                    {"N", o.full_height}, {"depth", o.depth}};
    r.horizons = {{"set", a.horizon().str()}, {"sampler_window", Natural(2 * q * o.depth).str()}};

    json widths = json::array();
    r.columns = {"level", "width", "strings"};
    bool width_ok = true;
    for (std::size_t l = 0; l < tree.levels.size(); ++l) {
        std::vector<std::string> strings;
        for (const auto& b : tree.levels[l]) strings.push_back(b.str());
        widths.push_back(tree.levels[l].size());
        r.rows.push_back({std::to_string(l), std::to_string(tree.levels[l].size()), join(strings, ";")});
        if (l > o.full_height && tree.levels[l].size() > 2 * o.q) width_ok = false;
    }
    json cand = json::array();
    for (const auto& c : candidates) cand.push_back(c.str());

    // Hypothesis: sampled density of the prefix set exceeds 1/q for all
    // N < n <= 2q*depth.
    const auto ps = prefix_set(a);
    bool hypothesis = true;
    Natural hits = 0;
    const Natural window = 2 * q * o.depth;
    for (Natural j = 0; j < window; ++j) {
        const Natural v = s(j);
        if (v < ps.horizon() && ps.contains(v)) ++hits;
        const Natural n = j + 1;
        if (n > o.full_height && Rational(hits, n) <= Rational(1, q)) hypothesis = false;
    }
    const bool recovered = o.depth <= a.horizon() &&
                           std::find(candidates.begin(), candidates.end(), restriction(a, o.depth)) != candidates.end();

    r.results = {{"level_widths", widths},
                 {"candidates", cand},
                 {"density_hypothesis", hypothesis},
                 {"prefix_recovered", recovered}};
    r.check("width_at_most_2q", width_ok);
    r.check("hypothesis_implies_recovery", !hypothesis || recovered);
    return r;
}

Report cmd_introreduce(const Options& o) {
    Report r;
    FiniteSet codes;
    for (const auto& c : parse_list(o.codes, "--codes")) codes.insert(c);
    r.parameters = {{"codes", naturals(codes)}};
    r.columns = {"position", "bit"};
    try {
        const BitString bits = introreduce(codes);
        r.results = {{"consistent", true}, {"bits", bits.str()}, {"length", bits.size()}};
        for (std::size_t i = 0; i < bits.size(); ++i) r.rows.push_back({std::to_string(i), bits[i] ? "1" : "0"});
        r.check("consistent", true);
        if (!o.set_spec.empty()) {
            const auto a = set_flag(o);
            r.parameters["set"] = a.spec();
            r.horizons["set"] = a.horizon().str();
            r.check("agrees_with_set", bits.size() <= a.horizon() && bits == restriction(a, bits.size()));
        }
    } catch (const InconsistencyError& e) {
        r.results = {{"consistent", false}, {"position", e.position()}, {"detail", e.what()}};
        r.check("consistent", false, e.what());
    }
    return r;
}

Report cmd_wct(const Options& o) {
    Report r;
    const auto a = set_flag(o);
    if (o.oracle_trace == !o.trace_file.empty())
        throw std::invalid_argument("wct needs exactly one of --oracle-trace and --trace-file");
    const auto n_max = static_cast<unsigned>(o.nmax);

    std::map<unsigned, BitString> h;
    if (o.oracle_trace) {
        for (unsigned n = 1; n <= n_max; ++n) h[n] = wct_target(a, n);
    } else {
        std::ifstream in(o.trace_file);
        if (!in) throw std::invalid_argument("--trace-file: cannot open '" + o.trace_file + "'");
        h = read_guess_map(in);
    }
    const auto g = build_wct_injection(h, n_max);
    const auto sampler = as_sampler(g);
    if (!o.export_path.empty()) {
        std::ofstream out(o.export_path);
        if (!out) throw std::invalid_argument("--export: cannot write '" + o.export_path + "'");
        write_injection_csv(out, g);
    }

    r.parameters = {{"set", a.spec()}, {"nmax", o.nmax}, {"trace", o.oracle_trace ? "oracle" : o.trace_file}};
    r.horizons = {{"set", a.horizon().str()}, {"injection_domain", std::to_string(g.table.size())}};

    json per_n = json::array();
    r.columns = {"n", "checkpoint", "density", "bound", "true_guess", "pass"};
    std::vector<std::uint64_t> sorted = g.table;
    std::sort(sorted.begin(), sorted.end());
    r.check("injective", std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
    for (unsigned n = 1; n <= n_max; ++n) {
        const Natural checkpoint = factorial(n);
        const Rational density = preimage_partial_density(a, sampler, checkpoint);
        const Rational bound = 1 - Rational(1, n);
        // The bound is guaranteed only when h(n) is the true trace.
        bool truthful = false;
        try {
            truthful = h.at(n) == wct_target(a, n);
        } catch (const InsufficientElements&) {
        }
        const bool meets = density >= bound;
        per_n.push_back({{"n", n},
                         {"checkpoint", checkpoint.str()},
                         {"density", to_string(density)},
                         {"bound", to_string(bound)},
                         {"true_guess", truthful},
                         {"meets_bound", meets}});
        r.rows.push_back({std::to_string(n), checkpoint.str(), to_string(density), to_string(bound),
                          truthful ? "true" : "false", meets ? "true" : "false"});
        r.check("bound_n" + std::to_string(n), !truthful || meets);
    }
    r.results = {{"checkpoints", per_n}};
    return r;
}

FunctionTable function_flag(const std::string& spec, std::size_t length, const std::string& flag) {
    if (spec.empty()) throw std::invalid_argument(flag + " is required");
    return FunctionTable::parse(spec, length);
}

Report cmd_graph(const Options& o) {
    Report r;
    const std::size_t horizon = to_size(natural_flag(o.horizon, "--horizon"));
    const auto f = function_flag(o.f_spec, horizon, "--f");
    const auto g = graph_set(f, horizon);
    r.parameters = {{"f", f.spec()}, {"horizon", horizon}};
    r.horizons = {{"function", horizon}, {"graph_stream", g.horizon().str()}};

    json members = json::array();
    r.columns = {"n", "f(n)", "code"};
    bool ok = true;
    for (std::size_t n = 0; n < horizon; ++n) {
        const Natural c = cantor_pair(n, f(n));
        ok = ok && g.contains(c) && cantor_unpair(c) == Pair{n, f(n)};
        members.push_back({{"n", n}, {"value", f(n).str()}, {"code", c.str()}});
        r.rows.push_back({std::to_string(n), f(n).str(), c.str()});
    }
    r.results = {{"members", members}};
    if (!o.checkpoints.empty()) {
        const auto profile = density_profile(g, parse_list(o.checkpoints, "--checkpoints"));
        json values = json::array();
        for (const auto& v : profile.values) values.push_back(to_string(v));
        r.results["densities"] = values;
    }
    r.check("members_unpair_to_graph", ok);
    return r;
}

Report cmd_trace(const Options& o) {
    Report r;
    const auto s = sampler_flag(o);
    const Natural q = o.q;
    const Natural n = natural_flag(o.n, "--n");
    const auto trace = trace_from_sampler(s, q, n);
    r.parameters = {{"sampler", sampler_json(s)}, {"q", o.q}, {"n", n.str()}};
    r.horizons = {{"window", Natural((n + 1) * q).str()}};
    r.results = {{"trace", naturals(trace)}, {"cardinality", trace.size()}, {"bound", Natural((n + 1) * q).str()}};
    r.columns = {"value"};
    for (const auto& v : trace) r.rows.push_back({v.str()});
    r.check("cardinality_at_most_(n+1)q", trace.size() <= (n + 1) * q);
    return r;
}

Report cmd_hits(const Options& o) {
    Report r;
    const auto s = sampler_flag(o);
    const std::size_t horizon = to_size(natural_flag(o.horizon, "--horizon"));
    const auto f = function_flag(o.f_spec, horizon, "--f");
    const Natural q = o.q;
    const auto hits = hit_indices(s, f, q, horizon);
    r.parameters = {{"sampler", sampler_json(s)}, {"f", f.spec()}, {"q", o.q}, {"horizon", horizon}};
    r.horizons = {{"function", horizon}, {"window", Natural(Natural(horizon) * q).str()}};

    json detail = json::array();
    r.columns = {"m", "f(m)", "trace_size", "bound", "in_trace"};
    bool sound = true;
    for (const Natural& m : hits) {
        const auto trace = trace_from_sampler(s, q, m);
        const bool in_trace = trace.count(f(m)) > 0;
        const bool small = trace.size() <= (m + 1) * q;
        sound = sound && in_trace && small;
        detail.push_back({{"m", m.str()}, {"value", f(m).str()}, {"trace_size", trace.size()}, {"in_trace", in_trace}});
        r.rows.push_back({m.str(), f(m).str(), std::to_string(trace.size()), Natural((m + 1) * q).str(),
                          in_trace ? "true" : "false"});
    }
    r.results = {{"hits", naturals(hits)}, {"detail", detail}};
    r.check("hits_caught_by_trace", sound);
    return r;
}

Report cmd_dom(const Options& o) {
    Report r;
    const auto s = sampler_flag(o);
    const Natural n = natural_flag(o.n, "--n");
    const auto f = function_flag(o.big_f_spec, to_size(n) + 1, "--F");
    const Natural q = o.q;
    const auto c = check_domination(f, s, q, n);
    r.parameters = {{"F", f.spec()}, {"sampler", sampler_json(s)}, {"q", o.q}, {"n", n.str()}};
    r.horizons = {{"window", Natural((n + 1) * q + 1).str()}};
    r.results = {{"h", c.h.str()}, {"F(n)", f(n).str()}, {"hit", c.hit}, {"dominates", c.dominates}};
    r.columns = {"n", "h", "F(n)", "hit", "dominates"};
    r.rows.push_back({n.str(), c.h.str(), f(n).str(), c.hit ? "true" : "false", c.dominates ? "true" : "false"});
    r.check("hit_implies_domination", c.holds());
    return r;
}

Report cmd_codes(const std::string& which, const Options& o, const CLI::App& sub) {
    Report r;
    auto given = [&](const std::string& flag) { return sub.get_option(flag)->count() > 0; };
    r.columns = {"input", "output"};
    if (which == "k") {
        if (given("--decode")) {
            const auto d = decode_prefix_free(BitString::parse(o.sigma));
            r.parameters = {{"decode", o.sigma}};
            r.results = {{"n", d.value.str()}, {"consumed", d.consumed}};
            r.rows.push_back({o.sigma, d.value.str()});
        } else {
            const Natural n = natural_flag(o.n, "--n");
            const auto k = prefix_free_code(n);
            r.parameters = {{"n", n.str()}};
            r.results = {{"code", k.str()}, {"length", k.size()}};
            r.rows.push_back({n.str(), k.str()});
            r.check("length_is_2floorlog2n_plus_2", k.size() == 2 * floor_log2(n) + 2);
            r.check("decodes_back", decode_prefix_free(k).value == n);
        }
    } else if (which == "c") {
        const Natural n = natural_flag(o.n, "--n");
        const Natural x = natural_flag(o.x, "--x");
        const auto c = fixed_width_code(n, x);
        r.parameters = {{"n", n.str()}, {"x", x.str()}};
        r.results = {{"code", c.str()}, {"width", c.size()}};
        r.rows.push_back({x.str(), c.str()});
        r.check("decodes_back", decode_fixed_width(n, c) == x);
    } else if (which == "pair") {
        if (given("--z")) {
            const Natural z = natural_flag(o.z, "--z");
            const Pair p = cantor_unpair(z);
            r.parameters = {{"z", z.str()}};
            r.results = {{"x", p.x.str()}, {"y", p.y.str()}};
            r.rows.push_back({z.str(), p.x.str() + ";" + p.y.str()});
            r.check("roundtrip", cantor_pair(p.x, p.y) == z);
        } else {
            const Natural x = natural_flag(o.x, "--x");
            const Natural y = natural_flag(o.y, "--y");
            const Natural z = cantor_pair(x, y);
            r.parameters = {{"x", x.str()}, {"y", y.str()}};
            r.results = {{"code", z.str()}};
            r.rows.push_back({x.str() + ";" + y.str(), z.str()});
            r.check("roundtrip", cantor_unpair(z) == Pair{x, y});
        }
    } else if (which == "string") {
        if (given("--code")) {
            const Natural c = natural_flag(o.code, "--code");
            const auto s = string_decode(c);
            r.parameters = {{"code", c.str()}};
            r.results = {{"string", s.str()}, {"length", s.size()}};
            r.rows.push_back({c.str(), s.str()});
            r.check("roundtrip", string_code(s) == c);
        } else {
            const auto s = BitString::parse(o.sigma);
            const Natural c = string_code(s);
            r.parameters = {{"sigma", s.str()}};
            r.results = {{"code", c.str()}};
            r.rows.push_back({s.str(), c.str()});
            r.check("roundtrip", string_decode(c) == s);
        }
    } else if (which == "setcode") {
        if (given("--code")) {
            const Natural c = natural_flag(o.code, "--code");
            const auto d = finite_set_decode(c);
            r.parameters = {{"code", c.str()}};
            r.results = {{"set", naturals(d)}};
            r.rows.push_back({c.str(), joined(d)});
            r.check("roundtrip", finite_set_code(d) == c);
        } else {
            FiniteSet d;
            for (const auto& v : parse_list(o.elems, "--elems")) d.insert(v);
            const Natural c = finite_set_code(d);
            r.parameters = {{"elems", naturals(d)}};
            r.results = {{"code", c.str()}};
            r.rows.push_back({joined(d), c.str()});
            r.check("roundtrip", finite_set_decode(c) == d);
        }
    }
    return r;
}

FamilyRegistry manifest_flag(const Options& o) {
    if (o.manifest.empty()) throw std::invalid_argument("--manifest is required");
    std::ifstream in(o.manifest);
    if (!in) throw std::invalid_argument("--manifest: cannot open '" + o.manifest + "'");
    return FamilyRegistry::parse_manifest(in);
}

json triple_json(const Triple& t) { return json::array({t.x.str(), t.y.str(), t.z.str()}); }

void add_bullets(Report& r, const ValidationReport& v) {
    json bullets = json::array();
    for (const BulletResult* b : v.bullets()) {
        json witness = json::array();
        for (const auto& t : b->witness) witness.push_back(triple_json(t));
        bullets.push_back({{"bullet", b->name}, {"pass", b->pass}, {"witness", witness}, {"detail", b->detail}});
        r.rows.push_back({b->name, b->pass ? "pass" : "fail", b->detail});
        r.check(b->name, b->pass, b->detail);
    }
    r.results["bullets"] = bullets;
}

Report cmd_weakrep(const std::string& which, const Options& o) {
    Report r;
    if (which == "validate") {
        if (o.table.empty()) throw std::invalid_argument("--table is required");
        std::ifstream in(o.table);
        if (!in) throw std::invalid_argument("--table: cannot open '" + o.table + "'");
        const auto t = read_weakrep(in, natural_flag(o.horizon, "--horizon"));
        r.parameters = {{"table", o.table}, {"triples", t.triples.size()}};
        r.horizons = {{"table", t.horizon.str()}};
        r.columns = {"bullet", "status", "detail"};
        add_bullets(r, validate_weakrep(t));
    } else if (which == "of-program") {
        const auto reg = manifest_flag(o);
        const Natural horizon = natural_flag(o.horizon, "--horizon");
        const auto t = table_of_program(reg, o.index, horizon);
        if (!o.export_path.empty()) {
            std::ofstream out(o.export_path);
            if (!out) throw std::invalid_argument("--export: cannot write '" + o.export_path + "'");
            write_weakrep(out, t);
        }
        r.parameters = {{"manifest", o.manifest}, {"index", o.index}, {"program", reg.program(o.index).name}};
        r.horizons = {{"table", horizon.str()}};
        json converged = json::array();
        Natural x_prev = -1;
        for (const auto& tr : t.triples) {
            if (tr.x == x_prev) continue;
            x_prev = tr.x;
            converged.push_back({{"x", tr.x.str()}, {"y", tr.y.str()}, {"first_stage", tr.z.str()}});
        }
        r.results = {{"triples", t.triples.size()}, {"converged", converged}};
        r.columns = {"bullet", "status", "detail"};
        add_bullets(r, validate_weakrep(t));
    } else if (which == "interleave") {
        const auto reg = manifest_flag(o);
        const auto derived = interleave_family(reg);
        r.parameters = {{"manifest", o.manifest}, {"inputs", o.inputs}};
        r.horizons = {{"inputs", o.inputs}, {"budget", reg.budget().str()}};
        auto show = [](const std::optional<Natural>& v) { return v ? v->str() : std::string("divergent"); };
        json programs = json::array();
        r.columns = {"program", "input", "value"};
        bool equal = true;
        for (std::size_t k = 0; k < derived.size(); ++k) {
            json values = json::array();
            for (std::uint64_t n = 0; n < o.inputs; ++n) {
                const auto v = derived.eval(k, n);
                values.push_back(show(v));
                r.rows.push_back({std::to_string(k), std::to_string(n), show(v)});
                const std::size_t e = k / 2;
                const auto expected = k % 2 == 0 ? reg.eval(e, Natural(n / 2)) : reg.eval(e, n);
                equal = equal && v == expected;
            }
            programs.push_back({{"index", k}, {"name", derived.program(k).name}, {"values", values}});
        }
        r.results = {{"programs", programs}};
        r.check("interleaving_equalities", equal);
    }
    return r;
}

Report cmd_pset(const Options& o) {
    Report r;
    const auto reg = manifest_flag(o);
    const auto g = function_flag(o.g_spec, o.length, "--g");
    IndexMap e_of;
    if (!o.eof.empty()) {
        std::ifstream in(o.eof);
        if (!in) throw std::invalid_argument("--eof: cannot open '" + o.eof + "'");
        e_of = read_index_map(in);
    }
    const auto checkpoints = parse_list(o.checkpoints, "--checkpoints");
    const auto a = graph_set(g, g.size());
    r.parameters = {{"g", g.spec()}, {"manifest", o.manifest}, {"eof", o.eof}, {"checkpoints", json::array()}};
    for (const auto& c : checkpoints) r.parameters["checkpoints"].push_back(c.str());
    r.horizons = {{"g", g.size()}, {"graph_stream", a.horizon().str()}};

    json per_n = json::array();
    r.columns = {"n", "max_sigma_length", "p", "code"};
    for (const Natural& n : checkpoints) {
        const Natural p = p_bound(reg, e_of, g, n);
        const Natural c = string_code(restriction(a, p));
        per_n.push_back(
            {{"n", n.str()}, {"max_sigma_length", sigma_length_bound(n)}, {"p", p.str()}, {"code", c.str()}});
        r.rows.push_back({n.str(), std::to_string(sigma_length_bound(n)), p.str(), c.str()});
    }
    const auto pset = build_P(g, reg, e_of, checkpoints);
    r.results = {{"checkpoints", per_n}, {"P", naturals(pset)}};
    // Every element of P decodes to a prefix of A = graph(g).
    bool prefixes = true;
    for (const auto& c : pset) {
        const auto sigma = string_decode(c);
        prefixes = prefixes && sigma == restriction(a, sigma.size());
    }
    r.check("P_consists_of_prefixes_of_graph", prefixes);
    return r;
}

// ---------------------------------------------------------------------------

std::string csv_escape(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void emit(std::ostream& out, const std::string& format, const std::string& command,
          const std::vector<std::string>& args, const Report& r, std::optional<double> wall_ms) {
    if (format == "csv") {
        std::vector<std::string> header;
        for (const auto& c : r.columns) header.push_back(csv_escape(c));
        out << join(header, ",") << '\n';
        for (const auto& row : r.rows) {
            std::vector<std::string> cells;
            for (const auto& c : row) cells.push_back(csv_escape(c));
            out << join(cells, ",") << '\n';
        }
        return;
    }
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = command;
    doc["argv"] = args;
    doc["parameters"] = r.parameters;
    doc["horizons"] = r.horizons;
    doc["results"] = r.results;
    json checks = json::array();
    for (const auto& c : r.checks) {
        json entry = {{"name", c.name}, {"pass", c.pass}};
        if (!c.detail.empty()) entry["detail"] = c.detail;
        checks.push_back(entry);
    }
    doc["checks"] = checks;
    doc["status"] = r.all_pass() ? "pass" : "fail";
    if (wall_ms) doc["wall_time_ms"] = *wall_ms;
    out << doc.dump(2) << '\n';
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Exact density experiments on sets of naturals"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    app.add_flag("--timing", o.timing, "Include wall-clock time in the report (breaks byte-identity)");

    std::string command;
    std::function<Report()> action;
    auto bind = [&](CLI::App* sub, std::string name, std::function<Report()> fn) {
        sub->callback([&command, &action, name = std::move(name), fn = std::move(fn)] {
            command = name;
            action = fn;
        });
    };
    auto set_opt = [&](CLI::App* sub, bool required = true) {
        auto* opt = sub->add_option("--set", o.set_spec, "Set stream: empty|full|evens|odds|seed:<u64>[:p=a/b]|file:<path>|list:<n,...>");
        if (required) opt->required();
        sub->add_option("--horizon", o.horizon, "Evaluation horizon for non-file streams");
    };
    auto sampler_opt = [&](CLI::App* sub) {
        sub->add_option("--sampler", o.sampler_spec, "Sampler: identity|double|shift:<k>|table:<csv>|swapblocks:<k>");
        sub->add_option("--domain", o.domain, "Domain bound for builtin samplers");
    };

    auto* density = app.add_subcommand("density", "Partial densities at checkpoints");
    set_opt(density);
    density->add_option("--checkpoints", o.checkpoints, "Comma-separated, strictly increasing")->required();
    bind(density, "density", [&] { return cmd_density(o); });

    auto* prefix = app.add_subcommand("prefix-set", "Members of the prefix set of A");
    set_opt(prefix);
    prefix->add_option("--count", o.count, "Number of members to list");
    bind(prefix, "prefix-set", [&] { return cmd_prefix_set(o); });

    auto* tree = app.add_subcommand("tree-decode", "Bounded-width tree from a sampler of prefix codes");
    set_opt(tree);
    tree->add_option("--sampler", o.sampler_spec, "prefixes (default) or a sampler spec");
    tree->add_option("--domain", o.domain, "Domain bound for builtin samplers");
    tree->add_option("--q", o.q, "Density parameter q >= 1")->required();
    tree->add_option("--N", o.full_height, "Height of the full part of the tree");
    tree->add_option("--depth", o.depth, "Tree depth")->required();
    bind(tree, "tree-decode", [&] { return cmd_tree_decode(o); });

    auto* intro = app.add_subcommand("introreduce", "Recover bits of A from prefix codes");
    intro->add_option("--codes", o.codes, "Comma-separated prefix codes")->required();
    set_opt(intro, false);
    bind(intro, "introreduce", [&] { return cmd_introreduce(o); });

    auto* wct = app.add_subcommand("wct", "Weak-traceability injection and its density bound");
    set_opt(wct);
    wct->add_option("--nmax", o.nmax, "Largest block index n")->required()->check(CLI::Range(1, 10));
    wct->add_flag("--oracle-trace", o.oracle_trace, "Use the true trace h(n) = A|p_A(n!)");
    wct->add_option("--trace-file", o.trace_file, "Guess file with n:<bits> lines");
    wct->add_option("--export", o.export_path, "Write the injection as j,g(j) CSV");
    bind(wct, "wct", [&] { return cmd_wct(o); });

    auto* graph = app.add_subcommand("graph", "Graph set of a function");
    graph->add_option("--f", o.f_spec, "Function: identity|const:<c>|pow2|square|factorial|list:..|file:..|seed:<s>:<bound>")->required();
    graph->add_option("--horizon", o.horizon, "Number of graph points")->required();
    graph->add_option("--checkpoints", o.checkpoints, "Optional density checkpoints");
    bind(graph, "graph", [&] { return cmd_graph(o); });

    auto* trace = app.add_subcommand("trace", "Trace extracted from a sampler");
    sampler_opt(trace);
    trace->add_option("--q", o.q, "Window factor q")->required();
    trace->add_option("--n", o.n, "Index n")->required();
    bind(trace, "trace", [&] { return cmd_trace(o); });

    auto* hits = app.add_subcommand("hits", "Indices where a sampler hits the graph in time");
    sampler_opt(hits);
    hits->add_option("--f", o.f_spec, "Function spec")->required();
    hits->add_option("--q", o.q, "Window factor q")->required();
    hits->add_option("--horizon", o.horizon, "Number of indices m")->required();
    bind(hits, "hits", [&] { return cmd_hits(o); });

    auto* dom = app.add_subcommand("dom", "Dominating adversary h(n)");
    sampler_opt(dom);
    dom->add_option("--F", o.big_f_spec, "Increasing function spec (default pow2)");
    dom->add_option("--q", o.q, "Window factor q")->required();
    dom->add_option("--n", o.n, "Index n")->required();
    bind(dom, "dom", [&] { return cmd_dom(o); });

    auto* codes = app.add_subcommand("codes", "Coding utilities");
    codes->require_subcommand(1);
    std::map<std::string, CLI::App*> code_subs;
    auto code_sub = [&](const std::string& name, const std::string& desc) {
        auto* sub = codes->add_subcommand(name, desc);
        code_subs[name] = sub;
        bind(sub, "codes " + name, [&o, name, sub] { return cmd_codes(name, o, *sub); });
        return sub;
    };
    auto* ck = code_sub("k", "Prefix-free code k(n)");
    ck->add_option("--n", o.n, "n >= 1");
    ck->add_option("--decode", o.sigma, "Decode a codeword instead");
    auto* cc = code_sub("c", "Fixed-width code c_n(x)");
    cc->add_option("--n", o.n, "n >= 2")->required();
    cc->add_option("--x", o.x, "x < n^2")->required();
    auto* cp = code_sub("pair", "Cantor pairing");
    cp->add_option("--x", o.x, "First component");
    cp->add_option("--y", o.y, "Second component");
    cp->add_option("--z", o.z, "Unpair this code instead");
    auto* cs = code_sub("string", "Length-lex string code");
    cs->add_option("--sigma", o.sigma, "Binary string");
    cs->add_option("--code", o.code, "Decode this code instead");
    auto* cset = code_sub("setcode", "Canonical finite-set index");
    cset->add_option("--elems", o.elems, "Comma-separated elements");
    cset->add_option("--code", o.code, "Decode this index instead");

    auto* weak = app.add_subcommand("weakrep", "Weakly-represented function tables");
    weak->require_subcommand(1);
    auto* wv = weak->add_subcommand("validate", "Check the four representation bullets");
    wv->add_option("--table", o.table, "File of x,y,z lines")->required();
    wv->add_option("--horizon", o.horizon, "Table horizon")->required();
    bind(wv, "weakrep validate", [&] { return cmd_weakrep("validate", o); });
    auto* wo = weak->add_subcommand("of-program", "Table of a registry program");
    wo->add_option("--manifest", o.manifest, "Registry manifest")->required();
    wo->add_option("--index", o.index, "Program index")->required();
    wo->add_option("--horizon", o.horizon, "Table horizon")->required();
    wo->add_option("--export", o.export_path, "Write the table as x,y,z lines");
    bind(wo, "weakrep of-program", [&] { return cmd_weakrep("of-program", o); });
    auto* wi = weak->add_subcommand("interleave", "Interleaved family g_{2e}, g_{2e+1}");
    wi->add_option("--manifest", o.manifest, "Registry manifest")->required();
    wi->add_option("--inputs", o.inputs, "Evaluate on [0, inputs)");
    bind(wi, "weakrep interleave", [&] { return cmd_weakrep("interleave", o); });

    auto* pset = app.add_subcommand("pset", "Prefix set P = {A|p(n)} for A the graph of g");
    pset->add_option("--g", o.g_spec, "Function spec for g")->required();
    pset->add_option("--length", o.length, "Table length for g");
    pset->add_option("--manifest", o.manifest, "Registry manifest")->required();
    pset->add_option("--eof", o.eof, "sigma:index map file");
    pset->add_option("--checkpoints", o.checkpoints, "Values n >= 2")->required();
    bind(pset, "pset", [&] { return cmd_pset(o); });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }
    if (!action) {
        err << "usage error: no subcommand\n";
        return kExitUsage;
    }

    try {
        const auto start = std::chrono::steady_clock::now();
        Report report = action();
        std::optional<double> wall;
        if (o.timing)
            wall = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        emit(out, o.format, command, args, report, wall);
        return report.all_pass() ? kExitOk : kExitCheckFailed;
    } catch (const std::exception& e) {
        err << "error: " << command << ": " << e.what() << '\n';
        return kExitUsage;
    }
}

} // namespace idensity::cli
