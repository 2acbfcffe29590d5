#include "idensity/weakrep.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "idensity/constructions.hpp"
#include "idensity/density.hpp"
#include "idensity/errors.hpp"

namespace idensity {

namespace {

std::string show(const Triple& t) { return "<" + t.x.str() + "," + t.y.str() + "," + t.z.str() + ">"; }

void fail(BulletResult& b, std::vector<Triple> witness, std::string detail) {
    if (!b.pass) return; // keep the first witness
    b.pass = false;
    b.witness = std::move(witness);
    b.detail = std::move(detail);
}

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

} // namespace

std::set<Natural> WeakRepTable::codes() const {
    std::set<Natural> out;
    for (const Triple& t : triples) out.insert(triple_code(t));
    return out;
}

ValidationReport validate_weakrep(const WeakRepTable& t) {
    ValidationReport report;
    const Natural& h = t.horizon;

    // Triples are ordered by (x, y, z), so each x and each (x, y) is a run.
    std::map<Natural, std::vector<const Triple*>> by_x;
    for (const Triple& tr : t.triples) by_x[tr.x].push_back(&tr);

    for (const Triple& tr : t.triples) {
        if (tr.x > h || tr.z > h) {
            fail(report.representation, {tr}, show(tr) + " lies outside horizon " + h.str());
            break;
        }
    }
    for (const auto& [x, group] : by_x) {
        const bool observable = std::any_of(group.begin(), group.end(), [](const Triple* p) { return p->y < p->z; });
        if (!observable)
            fail(report.representation, {*group.front()},
                 "f(" + x.str() + ") is witnessed but never converges by any step (no y < z)");
    }

    for (const auto& [x, group] : by_x) {
        for (const Triple* p : group) {
            if (p->y != group.front()->y) {
                fail(report.consistency, {*group.front(), *p},
                     show(*group.front()) + " and " + show(*p) + " disagree on f(" + x.str() + ")");
                break;
            }
        }
    }

    for (auto it = t.triples.begin(); it != t.triples.end(); ++it) {
        if (it->z >= h) continue;
        const Triple next{it->x, it->y, it->z + 1};
        auto succ = std::next(it);
        if (succ == t.triples.end() || !(*succ == next)) {
            fail(report.monotonicity, {*it, next}, show(*it) + " present but " + show(next) + " missing");
            break;
        }
    }

    Natural expected = 0;
    for (const auto& [x, group] : by_x) {
        if (x != expected) {
            fail(report.downward_closure, {*group.front()},
                 show(*group.front()) + " witnesses f(" + x.str() + ") but f(" + expected.str() + ") has no witness");
            break;
        }
        ++expected;
    }
    return report;
}

std::optional<Natural> eval_step(const WeakRepTable& t, const Natural& x, const Natural& z) {
    if (z > t.horizon) throw HorizonError("stage " + z.str() + " exceeds table horizon " + t.horizon.str());
    if (!validate_weakrep(t).all_pass()) throw std::invalid_argument("eval_step on an invalid weak-representation table");
    auto it = t.triples.lower_bound(Triple{x, 0, 0});
    for (; it != t.triples.end() && it->x == x; ++it)
        if (it->z == z && it->y < z) return it->y;
    return std::nullopt;
}

void write_weakrep(std::ostream& out, const WeakRepTable& t) {
    for (const Triple& tr : t.triples) out << tr.x << ',' << tr.y << ',' << tr.z << '\n';
}

WeakRepTable read_weakrep(std::istream& in, const Natural& horizon) {
    WeakRepTable t;
    t.horizon = horizon;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        const auto values = parse_natural_csv(line);
        if (values.size() != 3)
            throw std::invalid_argument("weakrep line " + std::to_string(line_no) + ": expected x,y,z");
        t.triples.insert(Triple{values[0], values[1], values[2]});
    }
    return t;
}

// ---------------------------------------------------------------------------

std::size_t FamilyRegistry::add(Program p) {
    programs_.push_back(std::move(p));
    return programs_.size() - 1;
}

const Program& FamilyRegistry::program(std::size_t e) const {
    if (e >= programs_.size())
        throw std::out_of_range("program index " + std::to_string(e) + " not registered (registry size " +
                                std::to_string(programs_.size()) + ")");
    return programs_[e];
}

std::optional<Natural> FamilyRegistry::eval(std::size_t e, const Natural& x, const Natural& budget) const {
    const auto run = program(e).run(x);
    if (!run || run->steps > budget) return std::nullopt;
    return run->value;
}

std::optional<std::size_t> FamilyRegistry::divergent_index() const {
    for (std::size_t e = 0; e < programs_.size(); ++e)
        if (programs_[e].always_diverges) return e;
    return std::nullopt;
}

namespace {

using CostFn = std::function<Natural(const Natural&)>;

CostFn parse_cost(std::string_view text) {
    // <k> | x+<k> | <a>x+<k> | x | <a>x
    const std::size_t xpos = text.find('x');
    if (xpos == std::string_view::npos) {
        const Natural k = parse_natural(text);
        return [k](const Natural&) { return k; };
    }
    const Natural a = xpos == 0 ? Natural(1) : parse_natural(text.substr(0, xpos));
    Natural k = 0;
    const std::string_view tail = text.substr(xpos + 1);
    if (!tail.empty()) {
        if (tail.front() != '+') throw std::invalid_argument("bad cost '" + std::string(text) + "'");
        k = parse_natural(tail.substr(1));
    }
    return [a, k](const Natural& x) { return a * x + k; };
}

Program make_program(std::string_view builtin, CostFn cost) {
    const std::string name(builtin);
    const std::size_t colon = builtin.find(':');
    const std::string_view kind = builtin.substr(0, colon);
    std::vector<Natural> args;
    if (colon != std::string_view::npos) {
        std::string_view rest = builtin.substr(colon + 1);
        while (true) {
            const std::size_t sep = rest.find(':');
            args.push_back(parse_natural(rest.substr(0, sep)));
            if (sep == std::string_view::npos) break;
            rest = rest.substr(sep + 1);
        }
    }
    auto need = [&](std::size_t count) {
        if (args.size() != count) throw std::invalid_argument("program '" + name + "' takes " + std::to_string(count) + " argument(s)");
    };
    using Fn = std::function<std::optional<Natural>(const Natural&)>;
    Fn fn;
    bool diverges = false;
    if (kind == "identity") {
        need(0);
        fn = [](const Natural& x) { return std::optional<Natural>(x); };
    } else if (kind == "square") {
        need(0);
        fn = [](const Natural& x) { return std::optional<Natural>(x * x); };
    } else if (kind == "diverge") {
        need(0);
        fn = [](const Natural&) { return std::optional<Natural>(); };
        diverges = true;
    } else if (kind == "const") {
        need(1);
        fn = [c = args[0]](const Natural&) { return std::optional<Natural>(c); };
    } else if (kind == "linear") {
        need(2);
        fn = [a = args[0], b = args[1]](const Natural& x) { return std::optional<Natural>(a * x + b); };
    } else if (kind == "halt-below") {
        need(1);
        fn = [k = args[0]](const Natural& x) { return x < k ? std::optional<Natural>(x) : std::nullopt; };
    } else {
        throw std::invalid_argument("unknown program '" + name + "'");
    }
    Program p;
    p.name = name;
    p.always_diverges = diverges;
    p.run = [fn = std::move(fn), cost = std::move(cost)](const Natural& x) -> std::optional<ProgramRun> {
        auto v = fn(x);
        if (!v) return std::nullopt;
        return ProgramRun{std::move(*v), cost(x)};
    };
    return p;
}

} // namespace

FamilyRegistry FamilyRegistry::parse_manifest(std::istream& in) {
    FamilyRegistry registry;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        std::istringstream words(line);
        std::string head;
        words >> head;
        try {
            if (head == "budget") {
                std::string value;
                words >> value;
                registry.budget_ = parse_natural(value);
                continue;
            }
            CostFn cost = [](const Natural&) { return Natural(1); };
            std::string option;
            while (words >> option) {
                if (option.rfind("cost=", 0) != 0) throw std::invalid_argument("unknown option '" + option + "'");
                cost = parse_cost(std::string_view(option).substr(5));
            }
            registry.add(make_program(head, std::move(cost)));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("manifest line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return registry;
}

WeakRepTable table_of_program(const FamilyRegistry& r, std::size_t e, const Natural& horizon) {
    const Program& p = r.program(e);
    WeakRepTable t;
    t.horizon = horizon;
    // Least stage by which every x' <= x has converged.
    Natural stage = 0;
    for (Natural x = 0; x <= horizon; ++x) {
        const auto run = p.run(x);
        if (!run) break;
        stage = std::max({stage, run->steps, Natural(run->value + 1)});
        if (stage > horizon) break;
        for (Natural z = stage; z <= horizon; ++z) t.triples.insert(Triple{x, run->value, z});
    }
    return t;
}

FamilyRegistry interleave_family(const FamilyRegistry& r) {
    FamilyRegistry out(r.budget());
    for (std::size_t e = 0; e < r.size(); ++e) {
        const Program& original = r.program(e);
        Program doubled;
        doubled.name = "interleave(" + original.name + ")";
        doubled.always_diverges = original.always_diverges;
        doubled.run = [run = original.run](const Natural& n) { return run(n / 2); };
        out.add(std::move(doubled));
        out.add(original);
    }
    return out;
}

Natural diagonal_avoid(const FunctionTable& g, const Natural& e) { return g(2 * e); }

// ---------------------------------------------------------------------------

SetStream image_set(const FunctionTable& f) {
    if (!f.strictly_increasing()) throw std::invalid_argument("image_set needs a strictly increasing function");
    auto values = std::make_shared<const std::vector<Natural>>(f.values());
    const Natural horizon = values->empty() ? Natural(0) : Natural(values->back() + 1);
    return SetStream("image(" + f.spec() + ")", horizon,
                     [values](const Natural& n) { return std::binary_search(values->begin(), values->end(), n); });
}

Natural dominating_adversary(const Sampler& s, const Natural& q, const Natural& n) {
    const Natural last = (n + 1) * q;
    Natural best = s(Natural(0));
    for (Natural i = 1; i <= last; ++i) best = std::max(best, s(i));
    return best + 1;
}

DominationCheck check_domination(const FunctionTable& f, const Sampler& s, const Natural& q, const Natural& n) {
    DominationCheck check;
    check.h = dominating_adversary(s, q, n);
    const Natural& target = f(n);
    check.hit = image_interval(s, (n + 1) * q).count(target) > 0;
    check.dominates = check.h > target;
    return check;
}

// ---------------------------------------------------------------------------

BitString prefix_free_code(const Natural& n) {
    if (n < 1) throw std::invalid_argument("prefix-free code is defined for n >= 1");
    const std::size_t top = floor_log2(n);
    BitString out;
    for (std::size_t i = top; i-- > 0;) {
        const bool b = boost::multiprecision::bit_test(n, static_cast<unsigned>(i));
        out.push_back(b);
        out.push_back(b);
    }
    out.push_back(false);
    out.push_back(true);
    return out;
}

PrefixFreeDecoded decode_prefix_free(const BitString& bits, std::size_t offset) {
    Natural value = 1;
    std::size_t i = offset;
    while (true) {
        if (i + 2 > bits.size()) throw std::invalid_argument("truncated prefix-free codeword");
        const bool a = bits[i], b = bits[i + 1];
        i += 2;
        if (!a && b) break;
        if (a != b) throw std::invalid_argument("invalid pair \"10\" at position " + std::to_string(i - 2));
        value = value * 2 + (a ? 1 : 0);
    }
    return {value, i - offset};
}

std::size_t fixed_width(const Natural& n) {
    const Natural square = n * n;
    std::size_t w = 0;
    while (pow2(w) < square) ++w;
    return w;
}

BitString fixed_width_code(const Natural& n, const Natural& x) {
    if (n < 2) throw std::invalid_argument("c_n needs n >= 2");
    if (x < 0 || x >= n * n) throw std::invalid_argument("c_n(x) needs x < n^2");
    const std::size_t w = fixed_width(n);
    std::vector<bool> bits(w);
    for (std::size_t i = 0; i < w; ++i) bits[i] = boost::multiprecision::bit_test(x, static_cast<unsigned>(w - 1 - i));
    return BitString(std::move(bits));
}

Natural decode_fixed_width(const Natural& n, const BitString& bits) {
    if (bits.size() != fixed_width(n)) throw std::invalid_argument("c_n codeword has the wrong width");
    Natural x = 0;
    for (bool b : bits.bits()) x = x * 2 + (b ? 1 : 0);
    return x;
}

BitString assemble_sigma_n(const BitString& sigma, const Natural& n, const Natural& x) {
    return sigma + prefix_free_code(n) + fixed_width_code(n, x);
}

std::optional<Natural> psi_eval(const FiniteSet& x_codes, const Natural& x, const Natural& budget) {
    std::optional<Natural> result;
    for (Natural xp = 0; xp <= x; ++xp) {
        result.reset();
        for (Natural y = 0; y < budget; ++y) {
            if (x_codes.count(cantor_pair(xp, y))) {
                result = y;
                break;
            }
        }
        if (!result) return std::nullopt;
    }
    return result;
}

IndexMap read_index_map(std::istream& in) {
    IndexMap map;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        const std::size_t colon = line.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("index map line " + std::to_string(line_no) + ": expected sigma:index");
        const BitString sigma = BitString::parse(std::string_view(line).substr(0, colon));
        const std::size_t index = to_size(parse_natural(std::string_view(line).substr(colon + 1)));
        if (!map.emplace(sigma, index).second)
            throw std::invalid_argument("index map line " + std::to_string(line_no) + ": duplicate sigma");
    }
    return map;
}

std::size_t sigma_length_bound(const Natural& n) {
    if (n < 2) throw std::invalid_argument("|sigma| < 5 log n needs n >= 2");
    const Natural fifth = n * n * n * n * n;
    std::size_t len = 0;
    while (pow2(len + 1) < fifth) ++len;
    return len;
}

Natural p_bound(const FamilyRegistry& r, const IndexMap& e_of, const FunctionTable& g, const Natural& n) {
    const std::size_t max_len = sigma_length_bound(n);
    const Natural strings_in_range = pow2(max_len + 1) - 1;

    std::set<std::size_t> indices;
    Natural mapped = 0;
    for (const auto& [sigma, e] : e_of) {
        if (sigma.size() > max_len) continue;
        indices.insert(e);
        ++mapped;
    }
    if (mapped < strings_in_range) {
        const auto divergent = r.divergent_index();
        if (!divergent) throw std::invalid_argument("unmapped strings need a registered divergent program");
        indices.insert(*divergent);
    }

    Natural best = 0;
    for (std::size_t e : indices) {
        r.program(e);
        const auto value = g.try_at(Natural(e));
        if (!value) throw std::invalid_argument("g undefined at program index " + std::to_string(e));
        best = std::max(best, cantor_pair(Natural(e), *value));
    }
    return best + 1;
}

FiniteSet build_P(const FunctionTable& g, const FamilyRegistry& r, const IndexMap& e_of,
                  const std::vector<Natural>& checkpoints) {
    FiniteSet out;
    if (checkpoints.empty()) return out;
    const SetStream a = graph_set(g, g.size());
    for (const Natural& n : checkpoints) out.insert(string_code(restriction(a, p_bound(r, e_of, g, n))));
    return out;
}

} // namespace idensity
