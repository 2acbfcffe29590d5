#include "idensity/constructions.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>

#include "idensity/density.hpp"
#include "idensity/errors.hpp"

namespace idensity {

namespace mp = boost::multiprecision;

SetStream prefix_set(const SetStream& a) {
    const std::size_t max_len = to_size(a.horizon());
    return SetStream("prefixes(" + a.spec() + ")", pow2(max_len + 1) - 1, [a](const Natural& code) {
        const std::size_t len = string_code_length(code);
        const Natural value = code + 1 - pow2(len);
        for (std::size_t i = 0; i < len; ++i)
            if (mp::bit_test(value, static_cast<unsigned>(len - 1 - i)) != a.contains(Natural(i))) return false;
        return true;
    });
}

Sampler prefix_enumerator(const SetStream& a) {
    return Sampler("prefixes(" + a.spec() + ")", SamplerKind::injection, a.horizon() + 1,
                   [a](const Natural& k) { return string_code(restriction(a, k)); });
}

BitString introreduce(const FiniteSet& codes) {
    if (codes.empty()) throw std::invalid_argument("introreduce needs at least one code");
    // Codes are length-lex, so the largest code decodes to a longest string.
    const BitString longest = string_decode(*codes.rbegin());
    for (const Natural& code : codes) {
        const BitString sigma = string_decode(code);
        for (std::size_t i = 0; i < sigma.size(); ++i) {
            if (sigma[i] != longest[i])
                throw InconsistencyError(i, "prefix codes " + code.str() + " (\"" + sigma.str() + "\") and " +
                                                codes.rbegin()->str() + " (\"" + longest.str() +
                                                "\") disagree at position " + std::to_string(i));
        }
    }
    return longest;
}

namespace {

std::vector<BitString> all_strings(std::size_t length) {
    if (length >= 24) throw std::invalid_argument("full tree height too large");
    std::vector<BitString> out;
    const std::size_t count = std::size_t{1} << length;
    out.reserve(count);
    for (std::size_t v = 0; v < count; ++v) {
        std::vector<bool> bits(length);
        for (std::size_t i = 0; i < length; ++i) bits[i] = (v >> (length - 1 - i)) & 1U;
        out.emplace_back(std::move(bits));
    }
    return out;
}

Natural string_value(const BitString& s) {
    Natural v = 0;
    for (bool b : s.bits()) {
        v <<= 1;
        if (b) v |= 1;
    }
    return v;
}

} // namespace

PrefixTree build_prefix_tree(const Sampler& s, const Natural& q, std::size_t full_height, std::size_t depth) {
    if (q < 1) throw std::invalid_argument("tree parameter q must be >= 1");
    PrefixTree tree;
    tree.q = q;
    tree.full_height = full_height;
    tree.depth = depth;

    for (std::size_t level = 0; level <= std::min(full_height, depth); ++level)
        tree.levels.push_back(all_strings(level));

    // (length, value) of each image element, evaluated lazily in order.
    std::vector<std::pair<std::size_t, Natural>> image;
    for (std::size_t n = full_height + 1; n <= depth; ++n) {
        const Natural window = 2 * q * n;
        while (image.size() < window) {
            const Natural code = s(Natural(image.size()));
            const std::size_t len = string_code_length(code);
            image.emplace_back(len, code + 1 - pow2(len));
        }

        // Number of image strings extending each length-n string, keyed by value.
        std::map<Natural, std::size_t> extensions;
        const std::size_t limit = to_size(window);
        for (std::size_t k = 0; k < limit; ++k) {
            const auto& [len, value] = image[k];
            if (len >= n) ++extensions[value >> (len - n)];
        }

        std::vector<BitString> level;
        for (const BitString& parent : tree.levels.back()) {
            for (bool bit : {false, true}) {
                BitString child = parent;
                child.push_back(bit);
                auto it = extensions.find(string_value(child));
                if (it != extensions.end() && it->second >= n) level.push_back(std::move(child));
            }
        }
        tree.levels.push_back(std::move(level));
    }
    return tree;
}

std::vector<BitString> extract_candidates(const PrefixTree& tree) { return tree.levels.at(tree.depth); }

BitString wct_target(const SetStream& a, unsigned n) {
    return restriction(a, principal_function(a, factorial(n)));
}

std::pair<std::uint64_t, std::uint64_t> WctInjection::block(unsigned n) {
    if (n == 0) throw std::invalid_argument("blocks are indexed from 1");
    const auto hi = factorial(n).convert_to<std::uint64_t>();
    if (n == 1) return {0, hi};
    return {factorial(n - 1).convert_to<std::uint64_t>(), hi};
}

WctInjection build_wct_injection(const std::map<unsigned, BitString>& guesses, unsigned n_max) {
    if (n_max < 1 || n_max > 10) throw std::invalid_argument("n_max must be in [1, 10]");
    WctInjection g;
    g.n_max = n_max;
    for (unsigned n = 1; n <= n_max; ++n) {
        auto it = guesses.find(n);
        if (it == guesses.end()) throw std::invalid_argument("guess h(" + std::to_string(n) + ") missing");
        g.guesses.emplace(n, it->second);
    }

    const std::uint64_t total = WctInjection::block(n_max).second;
    g.table.reserve(total);
    g.fallback.reserve(total);

    std::vector<bool> assigned;
    std::uint64_t least_free = 0;
    auto mark = [&](std::uint64_t v) {
        if (v >= assigned.size()) assigned.resize(std::max<std::uint64_t>(v + 1, assigned.size() * 2), false);
        assigned[v] = true;
        while (least_free < assigned.size() && assigned[least_free]) ++least_free;
    };
    auto is_assigned = [&](std::uint64_t v) { return v < assigned.size() && assigned[v]; };

    for (unsigned n = 1; n <= n_max; ++n) {
        const BitString& h = g.guesses.at(n);
        std::vector<std::uint64_t> ones;
        for (std::size_t i = 0; i < h.size(); ++i)
            if (h[i]) ones.push_back(i);

        const auto [lo, hi] = WctInjection::block(n);
        for (std::uint64_t j = lo; j < hi; ++j) {
            std::uint64_t value;
            bool fell_back = false;
            if (j < ones.size() && !is_assigned(ones[j])) {
                value = ones[j];
            } else {
                value = least_free;
                fell_back = true;
            }
            mark(value);
            g.table.push_back(value);
            g.fallback.push_back(fell_back);
        }
    }
    return g;
}

Sampler as_sampler(const WctInjection& g) {
    auto table = std::make_shared<const std::vector<std::uint64_t>>(g.table);
    return Sampler("wct-injection", SamplerKind::injection, Natural(table->size()),
                   [table](const Natural& j) { return Natural((*table)[j.convert_to<std::size_t>()]); });
}

std::map<unsigned, BitString> read_guess_map(std::istream& in) {
    std::map<unsigned, BitString> guesses;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const std::size_t colon = line.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("guess line " + std::to_string(line_no) + ": expected n:<bitstring>");
        const Natural n = parse_natural(std::string_view(line).substr(0, colon));
        if (n < 1 || n > 64) throw std::invalid_argument("guess line " + std::to_string(line_no) + ": n out of range");
        const auto key = n.convert_to<unsigned>();
        if (!guesses.emplace(key, BitString::parse(std::string_view(line).substr(colon + 1))).second)
            throw std::invalid_argument("guess line " + std::to_string(line_no) + ": duplicate n");
    }
    return guesses;
}

void write_injection_csv(std::ostream& out, const WctInjection& g) {
    out << "j,g(j)\n";
    for (std::size_t j = 0; j < g.table.size(); ++j) out << j << ',' << g.table[j] << '\n';
}

FiniteSet graph_members(const FunctionTable& f, std::size_t horizon) {
    if (f.size() < horizon)
        throw std::out_of_range("function '" + f.spec() + "' is not total on [0," + std::to_string(horizon) + ")");
    FiniteSet members;
    for (std::size_t n = 0; n < horizon; ++n) members.insert(cantor_pair(Natural(n), f(Natural(n))));
    return members;
}

SetStream graph_set(const FunctionTable& f, std::size_t horizon) {
    FiniteSet members = graph_members(f, horizon);
    Natural stream_horizon = Natural(horizon) * (horizon + 1) / 2;
    if (!members.empty()) stream_horizon = std::max(stream_horizon, Natural(*members.rbegin() + 1));
    return SetStream::from_members(std::move(members), stream_horizon, "graph(" + f.spec() + ")");
}

FiniteSet trace_from_sampler(const Sampler& s, const Natural& q, const Natural& n) {
    FiniteSet trace;
    for (const Natural& code : image_interval(s, (n + 1) * q)) trace.insert(cantor_unpair(code).y);
    return trace;
}

FiniteSet hit_indices(const Sampler& s, const FunctionTable& f, const Natural& q, std::size_t horizon) {
    FiniteSet hits;
    if (horizon == 0) return hits;
    // First position of each value in s([0, horizon*q)); s is injective.
    std::map<Natural, Natural> position;
    const Natural window = Natural(horizon) * q;
    if (window > s.domain_bound()) throw DomainError("hit_indices needs s on [0," + window.str() + ")");
    for (Natural j = 0; j < window; ++j) position.emplace(s(j), j);
    for (std::size_t m = 0; m < horizon; ++m) {
        auto it = position.find(cantor_pair(Natural(m), f(Natural(m))));
        if (it != position.end() && it->second < (m + 1) * q) hits.insert(Natural(m));
    }
    return hits;
}

} // namespace idensity
