#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <vector>

#include "idensity/bit_string.hpp"
#include "idensity/coding.hpp"
#include "idensity/function_table.hpp"
#include "idensity/natural.hpp"
#include "idensity/sampler.hpp"
#include "idensity/set_stream.hpp"

namespace idensity {

// ---------------------------------------------------------------------------
// Prefix sets and tree decoding

// The set {string_code(A|n) : n <= horizon(A)}. Its horizon is
// 2^(horizon(A)+1) - 1, the first code of a string longer than A's horizon.
SetStream prefix_set(const SetStream& a);

// The sampler k -> string_code(A|k) on [0, horizon(A)+1): enumerates the
// prefix set in increasing order.
Sampler prefix_enumerator(const SetStream& a);

// Merges the bit constraints of the decoded strings. Throws
// std::invalid_argument for an empty input and InconsistencyError (with the
// first conflicting position) when two strings disagree.
BitString introreduce(const FiniteSet& codes);

struct PrefixTree {
    Natural q;
    std::size_t full_height = 0; // N
    std::size_t depth = 0;
    // levels[l] holds the strings of length l, in lexicographic order.
    std::vector<std::vector<BitString>> levels;

    std::size_t width(std::size_t level) const { return levels.at(level).size(); }
};

// Levels 0..min(N, depth) are full. Beyond N, sigma of length n is kept iff
// its parent is kept and s([0, 2qn)) contains at least n codes of strings
// extending sigma (sigma itself included).
PrefixTree build_prefix_tree(const Sampler& s, const Natural& q, std::size_t full_height, std::size_t depth);

// The strings at the tree's requested depth; empty when the tree died out.
std::vector<BitString> extract_candidates(const PrefixTree& tree);

// ---------------------------------------------------------------------------
// Weak-traceability injection

// A|p_A(n!): the bits of A strictly below its n!-th element, which contain
// exactly n! ones. Throws InsufficientElements if p_A(n!) is past the horizon.
BitString wct_target(const SetStream& a, unsigned n);

struct WctInjection {
    unsigned n_max = 0;
    std::vector<std::uint64_t> table;      // g(j) for j < n_max!
    std::vector<bool> fallback;            // g(j) came from the least-unassigned rule
    std::map<unsigned, BitString> guesses; // h(n)

    // [lo, hi) of block I_n: I_1 = [0,1), I_n = [(n-1)!, n!).
    static std::pair<std::uint64_t, std::uint64_t> block(unsigned n);
};

// Assigns g(j) in increasing j. Within block I_n, g(j) is the position of the
// j-th one of h(n) (global j, 0-indexed) when that one exists and the
// position is unused; otherwise the least unused natural.
// Requires h(n) for every 1 <= n <= n_max, and n_max <= 10.
WctInjection build_wct_injection(const std::map<unsigned, BitString>& guesses, unsigned n_max);

Sampler as_sampler(const WctInjection& g);

// `n:<bitstring>` per line; blank lines and '#' comments ignored.
std::map<unsigned, BitString> read_guess_map(std::istream& in);
void write_injection_csv(std::ostream& out, const WctInjection& g);

// ---------------------------------------------------------------------------
// Graph sets and the trace adversary

// {<n, f(n)> : n < horizon} as a stream. Membership is that of this finite
// set; below horizon(horizon+1)/2 it also agrees with the full graph of f.
// The stream horizon is the larger of that bound and 1 + the largest member.
SetStream graph_set(const FunctionTable& f, std::size_t horizon);
FiniteSet graph_members(const FunctionTable& f, std::size_t horizon);

// {y : <x,y> in s([0, (n+1)q))}.
FiniteSet trace_from_sampler(const Sampler& s, const Natural& q, const Natural& n);

// {m < horizon : <m, f(m)> in s([0, (m+1)q))}.
FiniteSet hit_indices(const Sampler& s, const FunctionTable& f, const Natural& q, std::size_t horizon);

} // namespace idensity
