// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Expected values come from closed forms or brute force here, not
// from the library.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "idensity/cli.hpp"
#include "idensity/coding.hpp"
#include "idensity/constructions.hpp"
#include "idensity/density.hpp"
#include "idensity/errors.hpp"
#include "idensity/weakrep.hpp"
#include "oracles.hpp"

using namespace idensity;

namespace {

// Wall-clock limits, in seconds.
constexpr double kLimitAc1 = 5.0;
constexpr double kLimitAc2 = 5.0;
constexpr double kLimitAc4 = 10.0;

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---------------------------------------------------------------------------

Outcome ac1_wct_density() {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    const unsigned n_max = 7;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto a = SetStream::seeded(seed * 7919, Natural(1) << 20);
        std::map<unsigned, BitString> h;
        for (unsigned n = 1; n <= n_max; ++n) h[n] = wct_target(a, n);
        const auto g = as_sampler(build_wct_injection(h, n_max));
        std::uint64_t checkpoint = 1;
        for (unsigned n = 1; n <= n_max; ++n) {
            checkpoint *= n;
            const Rational density = preimage_partial_density(a, g, checkpoint);
            if (density < Rational(n - 1, n))
                o.fail("seed " + std::to_string(seed) + " n=" + std::to_string(n) + ": density " +
                       to_string(density));
        }
    }
    const double t = seconds_since(start);
    if (t >= kLimitAc1) o.fail("took " + std::to_string(t) + " s");
    if (o.pass) o.detail = "20 sets, n <= 7, " + std::to_string(t) + " s";
    return o;
}

Outcome ac2_prefix_tree() {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    const std::size_t depth = 64;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto a = SetStream::seeded(seed * 104729, 4096);
        const BitString truth = restriction(a, depth);
        for (std::uint64_t q : {2, 3}) {
            const auto tree = build_prefix_tree(prefix_enumerator(a), q, 0, depth);
            for (std::size_t level = 1; level <= depth; ++level)
                if (tree.width(level) > 2 * q)
                    o.fail("seed " + std::to_string(seed) + " q=" + std::to_string(q) + " level " +
                           std::to_string(level) + " width " + std::to_string(tree.width(level)));
            const auto candidates = extract_candidates(tree);
            if (std::find(candidates.begin(), candidates.end(), truth) == candidates.end())
                o.fail("seed " + std::to_string(seed) + " q=" + std::to_string(q) + ": A|64 not recovered");
        }
    }
    const double t = seconds_since(start);
    if (t >= kLimitAc2) o.fail("took " + std::to_string(t) + " s");
    if (o.pass) o.detail = "10 sets, q in {2,3}, " + std::to_string(t) + " s";
    return o;
}

Outcome ac3_trace_adversary() {
    Outcome o;
    std::mt19937_64 rng(3);
    const std::size_t horizon = 200;
    std::size_t total_hits = 0;
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Natural> perm(1000);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        const auto pi = Sampler::finite_support(perm, 1000000);
        std::vector<Natural> values;
        for (std::size_t m = 0; m < horizon; ++m) values.emplace_back(rng() % 30);
        const FunctionTable f(values);
        for (std::uint64_t q : {1, 2, 3}) {
            // Reference hits: <m, f(m)> among pi(0..(m+1)q-1).
            std::vector<std::size_t> expected;
            for (std::size_t m = 0; m < horizon; ++m) {
                const Natural code = oracle::pair_by_walk(m, static_cast<std::uint64_t>(values[m]));
                bool hit = false;
                for (std::size_t j = 0; j < (m + 1) * q; ++j) hit = hit || (j < 1000 ? perm[j] : Natural(j)) == code;
                if (hit) expected.push_back(m);
            }
            const auto hits = hit_indices(pi, f, q, horizon);
            if (hits.size() != expected.size()) o.fail("hit count differs from brute force");
            total_hits += hits.size();
            for (const Natural& m : hits) {
                const auto trace = trace_from_sampler(pi, q, m);
                if (!trace.count(f(m))) o.fail("f(" + m.str() + ") missing from trace");
                if (trace.size() > (m + 1) * q) o.fail("trace at m=" + m.str() + " too large");
            }
        }
    }
    if (total_hits == 0) o.fail("no hits, check is vacuous");
    if (o.pass) o.detail = std::to_string(total_hits) + " hits checked";
    return o;
}

Outcome ac4_codings() {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();

    // Pairing, against a diagonal walk.
    std::uint64_t x = 0, y = 0;
    for (std::uint64_t z = 0; z < 100000; ++z) {
        const Pair p = cantor_unpair(z);
        if (p.x != x || p.y != y || cantor_pair(p.x, p.y) != z) {
            o.fail("pairing mismatch at " + std::to_string(z));
            break;
        }
        if (x == 0) {
            x = y + 1;
            y = 0;
        } else {
            --x;
            ++y;
        }
    }

    // Strings in length-lex order get consecutive codes.
    const auto strings = oracle::strings_length_lex(16);
    for (std::size_t i = 0; i < strings.size(); ++i) {
        const auto sigma = BitString::parse(strings[i]);
        if (string_code(sigma) != i || string_decode(i) != sigma) {
            o.fail("string code mismatch at '" + strings[i] + "'");
            break;
        }
    }

    // k(n): lengths, decodability, and pairwise prefix-freeness.
    std::vector<std::string> k(4097);
    for (std::uint64_t n = 1; n <= 4096; ++n) {
        const auto code = prefix_free_code(n);
        std::size_t log2 = 0;
        while ((n >> (log2 + 1)) != 0) ++log2;
        if (code.size() != 2 * log2 + 2) o.fail("|k(" + std::to_string(n) + ")| wrong");
        if (decode_prefix_free(code).value != n) o.fail("k(" + std::to_string(n) + ") does not decode");
        k[n] = code.str();
    }
    for (std::size_t a = 1; a <= 4096 && o.pass; ++a)
        for (std::size_t b = 1; b <= 4096; ++b)
            if (a != b && k[a].size() <= k[b].size() && k[b].compare(0, k[a].size(), k[a]) == 0) {
                o.fail("k(" + std::to_string(a) + ") is a prefix of k(" + std::to_string(b) + ")");
                break;
            }

    // c_n: fixed width, bijective on [0, n^2).
    for (std::uint64_t n = 2; n <= 64; ++n) {
        std::size_t width = 0;
        while ((std::uint64_t{1} << width) < n * n) ++width;
        for (std::uint64_t v = 0; v < n * n; ++v) {
            const auto c = fixed_width_code(n, v);
            if (c.size() != width || decode_fixed_width(n, c) != v) {
                o.fail("c_" + std::to_string(n) + "(" + std::to_string(v) + ") roundtrip");
                break;
            }
        }
    }

    const double t = seconds_since(start);
    if (t >= kLimitAc4) o.fail("took " + std::to_string(t) + " s");
    if (o.pass) o.detail = std::to_string(t) + " s";
    return o;
}

Outcome ac5_psi_graph() {
    Outcome o;
    std::mt19937_64 rng(5);
    const std::size_t horizon = 50;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Natural> values;
        for (std::size_t x = 0; x < horizon; ++x) values.emplace_back(rng() % 100);
        const FunctionTable f(values);
        const auto members = graph_members(f, horizon);
        for (std::size_t x = 0; x < horizon; ++x) {
            const auto v = psi_eval(members, x, 100);
            if (!v || *v != values[x]) o.fail("trial " + std::to_string(trial) + " x=" + std::to_string(x));
        }
    }
    if (o.pass) o.detail = "100 functions on [0,50)";
    return o;
}

// ---------------------------------------------------------------------------

bool has(const WeakRepTable& t, const Triple& tr) { return t.triples.count(tr) > 0; }

// Random valid table: x in [0, m), each with one value and a stage.
WeakRepTable random_valid(std::mt19937_64& rng, std::uint64_t h) {
    WeakRepTable t;
    t.horizon = h;
    const std::uint64_t m = rng() % (h + 2);
    for (std::uint64_t x = 0; x < m; ++x) {
        const std::uint64_t y = rng() % h;
        const std::uint64_t stage = rng() % (h + 1);
        for (std::uint64_t z = stage; z <= h; ++z) t.triples.insert(Triple{x, y, z});
    }
    return t;
}

Outcome ac6_weakrep_validator() {
    Outcome o;
    std::mt19937_64 rng(6);

    for (int i = 0; i < 200; ++i) {
        const auto t = random_valid(rng, 2 + rng() % 20);
        if (!validate_weakrep(t).all_pass()) o.fail("fuzzed valid table " + std::to_string(i) + " rejected");
    }

    int caught = 0;
    for (int i = 0; i < 50; ++i) {
        // Base with at least two inputs, every stage below the horizon.
        const std::uint64_t h = 6 + rng() % 10;
        WeakRepTable base;
        base.horizon = h;
        for (std::uint64_t x = 0; x < 3; ++x)
            for (std::uint64_t z = 1 + rng() % 3; z <= h; ++z) base.triples.insert(Triple{x, x % 2, z});

        // Consistency: a second value at x = 1.
        auto cons = base;
        cons.triples.insert(Triple{1, 5, h});
        const auto rc = validate_weakrep(cons);
        const auto& wc = rc.consistency.witness;
        const bool c_ok = !rc.consistency.pass && wc.size() == 2 && has(cons, wc[0]) && has(cons, wc[1]) &&
                          wc[0].x == wc[1].x && wc[0].y != wc[1].y && rc.monotonicity.pass &&
                          rc.downward_closure.pass;

        // Monotonicity: drop a middle stage of x = 2.
        auto mono = base;
        mono.triples.erase(Triple{2, 0, h - 1});
        const auto rm = validate_weakrep(mono);
        const auto& wm = rm.monotonicity.witness;
        const bool m_ok = !rm.monotonicity.pass && wm.size() == 2 && has(mono, wm[0]) && !has(mono, wm[1]) &&
                          wm[1] == Triple{wm[0].x, wm[0].y, wm[0].z + 1} && rm.consistency.pass &&
                          rm.downward_closure.pass;

        // Downward closure: input 4 present, 3 absent.
        auto down = base;
        for (std::uint64_t z = 2; z <= h; ++z) down.triples.insert(Triple{4, 0, z});
        const auto rd = validate_weakrep(down);
        const auto& wd = rd.downward_closure.witness;
        const bool d_ok = !rd.downward_closure.pass && wd.size() == 1 && has(down, wd[0]) && wd[0].x == 4 &&
                          rd.consistency.pass && rd.monotonicity.pass;

        // Representation: value never observable because y >= every stage.
        auto rep = base;
        for (std::uint64_t z = 3; z <= h; ++z) rep.triples.insert(Triple{3, h + 7, z});
        const auto rr = validate_weakrep(rep);
        const auto& wr = rr.representation.witness;
        const bool r_ok = !rr.representation.pass && wr.size() == 1 && has(rep, wr[0]) && wr[0].x == 3 &&
                          rr.consistency.pass && rr.monotonicity.pass && rr.downward_closure.pass;

        if (!c_ok) o.fail("consistency mutant " + std::to_string(i));
        if (!m_ok) o.fail("monotonicity mutant " + std::to_string(i));
        if (!d_ok) o.fail("downward-closure mutant " + std::to_string(i));
        if (!r_ok) o.fail("representation mutant " + std::to_string(i));
        caught += c_ok + m_ok + d_ok + r_ok;
    }

    const char* builtins[] = {"identity", "square", "diverge", "const:4", "linear:3:2", "halt-below:3"};
    for (int trial = 0; trial < 40; ++trial) {
        std::string manifest;
        for (int i = 0; i < 4; ++i)
            manifest += std::string(builtins[rng() % 6]) + " cost=" + std::to_string(rng() % 3) + "x+" +
                        std::to_string(rng() % 4) + "\n";
        std::istringstream in(manifest);
        const auto reg = FamilyRegistry::parse_manifest(in);
        for (std::size_t e = 0; e < reg.size(); ++e)
            if (!validate_weakrep(table_of_program(reg, e, 3 + rng() % 20)).all_pass())
                o.fail("table_of_program output rejected");
    }
    if (o.pass) o.detail = std::to_string(caught) + " mutants caught, 200 valid tables accepted";
    return o;
}

Outcome ac7_domination() {
    Outcome o;
    std::mt19937_64 rng(7);
    const std::uint64_t q = 2;
    const std::size_t domain = 64; // > (30+1)q
    std::vector<Natural> powers;
    for (unsigned k = 0; k <= 31; ++k) powers.push_back(Natural(1) << k);
    const FunctionTable big_f(powers, "pow2");
    int hits = 0;
    for (int trial = 0; trial < 10; ++trial) {
        std::set<Natural> used;
        std::vector<Natural> table;
        for (const auto& p : powers)
            if (rng() % 2 && table.size() < domain && used.insert(p).second) table.push_back(p);
        while (table.size() < domain) {
            const Natural v = rng() % (std::uint64_t{1} << 32);
            if (used.insert(v).second) table.push_back(v);
        }
        std::shuffle(table.begin(), table.end(), rng);
        const auto s = Sampler::from_table(table, "seeded-" + std::to_string(trial));
        for (std::uint64_t n = 0; n <= 30; ++n) {
            // Reference: F(n) among s(0..(n+1)q-1) and the max over i <= (n+1)q.
            const auto window = table.begin() + static_cast<std::ptrdiff_t>((n + 1) * q);
            const bool hit = std::find(table.begin(), window, powers[n]) != window;
            const Natural top = *std::max_element(table.begin(), window + 1);
            const Natural h = dominating_adversary(s, q, n);
            if (h != top + 1) o.fail("h(" + std::to_string(n) + ") differs from brute force");
            if (hit) {
                ++hits;
                if (h <= powers[n]) o.fail("trial " + std::to_string(trial) + " n=" + std::to_string(n));
            }
            if (check_domination(big_f, s, q, n).hit != hit) o.fail("hit flag differs from brute force");
        }
    }
    if (hits == 0) o.fail("no hits, check is vacuous");
    if (o.pass) o.detail = std::to_string(hits) + " hits dominated";
    return o;
}

Outcome ac8_introreduce() {
    Outcome o;
    std::mt19937_64 rng(8);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto a = SetStream::seeded(seed * 31337, 4096);
        FiniteSet codes;
        std::vector<BitString> prefixes;
        for (std::size_t len = 1; len <= 64; ++len) {
            prefixes.push_back(restriction(a, len));
            codes.insert(string_code(prefixes.back()));
        }
        if (introreduce(codes) != restriction(a, 64)) o.fail("seed " + std::to_string(seed) + " not recovered");

        // Flip bit p of one prefix of length > p.
        const std::size_t p = rng() % 64;
        const std::size_t len = p + 1 + rng() % (64 - p);
        std::vector<bool> bits = prefixes[len - 1].bits();
        bits[p] = !bits[p];
        FiniteSet bad;
        for (std::size_t l = 1; l <= 64; ++l)
            bad.insert(string_code(l == len ? BitString(bits) : prefixes[l - 1]));
        try {
            introreduce(bad);
            o.fail("seed " + std::to_string(seed) + ": flipped input accepted");
        } catch (const InconsistencyError& e) {
            if (e.position() != p)
                o.fail("seed " + std::to_string(seed) + ": position " + std::to_string(e.position()) +
                       ", expected " + std::to_string(p));
        }
    }
    if (o.pass) o.detail = "20 sets recovered, 20 flips located";
    return o;
}

Outcome ac9_cli_determinism() {
    Outcome o;
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("idensity-acceptance-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream(dir / name) << text;
        return (dir / name).string();
    };
    const auto manifest = write("family.txt", "identity cost=1\nsquare cost=x+1\ndiverge\nhalt-below:3\n");
    const auto table = write("table.txt", "0,1,2\n0,1,3\n0,1,4\n1,0,3\n1,0,4\n");
    const auto guesses = write("guesses.txt", "1:1\n2:10\n3:101101\n");
    const auto eof = write("eof.txt", "0:0\n1:1\n");

    const std::vector<std::vector<std::string>> commands = {
        {"density", "--set", "seed:42", "--checkpoints", "10,100,1000"},
        {"--format", "csv", "density", "--set", "evens", "--checkpoints", "2,4,8"},
        {"prefix-set", "--set", "seed:9", "--count", "12"},
        {"tree-decode", "--set", "seed:7", "--q", "2", "--depth", "16"},
        {"introreduce", "--codes", "2,5,12"},
        {"introreduce", "--codes", "1,4,5"},
        {"wct", "--set", "seed:42", "--nmax", "5", "--oracle-trace"},
        {"wct", "--set", "seed:42", "--nmax", "3", "--trace-file", guesses},
        {"graph", "--f", "square", "--horizon", "10"},
        {"trace", "--sampler", "swapblocks:3", "--q", "2", "--n", "5"},
        {"hits", "--sampler", "double", "--f", "seed:3:20", "--q", "2", "--horizon", "30"},
        {"dom", "--sampler", "shift:3", "--q", "2", "--n", "6"},
        {"codes", "k", "--n", "5"},
        {"codes", "c", "--n", "5", "--x", "7"},
        {"codes", "pair", "--x", "3", "--y", "4"},
        {"codes", "pair", "--z", "31"},
        {"codes", "string", "--sigma", "0110"},
        {"codes", "string", "--code", "20"},
        {"codes", "setcode", "--elems", "0,2,5"},
        {"codes", "setcode", "--code", "37"},
        {"weakrep", "validate", "--table", table, "--horizon", "4"},
        {"weakrep", "of-program", "--manifest", manifest, "--index", "1", "--horizon", "8"},
        {"weakrep", "interleave", "--manifest", manifest, "--inputs", "6"},
        {"pset", "--g", "identity", "--length", "16", "--manifest", manifest, "--eof", eof, "--checkpoints",
         "2,3,4"},
    };
    for (const auto& args : commands) {
        std::ostringstream out1, err1, out2, err2;
        const int rc1 = cli::run(args, out1, err1);
        const int rc2 = cli::run(args, out2, err2);
        std::string line;
        for (const auto& a : args) line += a + " ";
        if (rc1 == cli::kExitUsage) o.fail("usage error: " + line + "| " + err1.str());
        if (rc1 != rc2 || out1.str() != out2.str() || err1.str() != err2.str() || out1.str().empty())
            o.fail("non-deterministic: " + line);
    }
    fs::remove_all(dir);
    if (o.pass) o.detail = std::to_string(commands.size()) + " invocations";
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"AC1", ac1_wct_density},     {"AC2", ac2_prefix_tree},   {"AC3", ac3_trace_adversary},
        {"AC4", ac4_codings},         {"AC5", ac5_psi_graph},     {"AC6", ac6_weakrep_validator},
        {"AC7", ac7_domination},      {"AC8", ac8_introreduce},   {"AC9", ac9_cli_determinism},
    };
    bool all = true;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        all = all && o.pass;
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << "  " << o.detail << std::endl;
    }
    return all ? 0 : 1;
}
