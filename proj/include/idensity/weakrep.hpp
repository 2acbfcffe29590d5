#pragma once

#include <cstddef>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "idensity/bit_string.hpp"
#include "idensity/coding.hpp"
#include "idensity/function_table.hpp"
#include "idensity/natural.hpp"
#include "idensity/sampler.hpp"
#include "idensity/set_stream.hpp"

namespace idensity {

// ---------------------------------------------------------------------------
// Weakly-represented partial functions

// A finite set of triples <x,y,z>, read as "f(x) converges to y, witnessed at
// stage z". Triples are stored decoded; code() gives <x,<y,z>>.
struct WeakRepTable {
    std::set<Triple> triples;
    Natural horizon;

    std::set<Natural> codes() const;
};

struct BulletResult {
    std::string name;
    bool pass = true;
    std::vector<Triple> witness; // offending triple(s); empty when passing
    std::string detail;
};

struct ValidationReport {
    BulletResult representation{"representation", true, {}, {}};
    BulletResult consistency{"consistency", true, {}, {}};
    BulletResult monotonicity{"monotonicity", true, {}, {}};
    BulletResult downward_closure{"downward_closure", true, {}, {}};

    bool all_pass() const {
        return representation.pass && consistency.pass && monotonicity.pass && downward_closure.pass;
    }
    std::vector<const BulletResult*> bullets() const {
        return {&representation, &consistency, &monotonicity, &downward_closure};
    }
};

// Checks each bullet independently:
//  representation    every triple lies in [0,horizon]^2 on x and z, and every
//                    x with a triple has one with y < z, so the value is
//                    observable by step evaluation
//  consistency       <x,y,z>, <x,y',z'> present => y = y'
//  monotonicity      <x,y,z> present => <x,y,z'> present for z < z' <= horizon
//  downward closure  x has a triple => every t < x has one
ValidationReport validate_weakrep(const WeakRepTable& t);

// f(x)[z]: y if <x,y,z> is present with y < z. Throws std::invalid_argument
// for an invalid table and HorizonError for z > horizon.
std::optional<Natural> eval_step(const WeakRepTable& t, const Natural& x, const Natural& z);

// Sorted `x,y,z` lines.
void write_weakrep(std::ostream& out, const WeakRepTable& t);
WeakRepTable read_weakrep(std::istream& in, const Natural& horizon);

// ---------------------------------------------------------------------------
// Program registries

struct ProgramRun {
    Natural value;
    Natural steps;
};

// A deterministic program: either halts with (value, steps) or never halts.
struct Program {
    std::string name;
    std::function<std::optional<ProgramRun>(const Natural&)> run;
    bool always_diverges = false;
};

class FamilyRegistry {
public:
    explicit FamilyRegistry(Natural budget = 1000) : budget_(std::move(budget)) {}

    std::size_t add(Program p);
    std::size_t size() const noexcept { return programs_.size(); }
    const Program& program(std::size_t e) const;
    const Natural& budget() const noexcept { return budget_; }

    // r_e(x) if it halts within the budget, otherwise nullopt (divergent).
    std::optional<Natural> eval(std::size_t e, const Natural& x) const { return eval(e, x, budget_); }
    std::optional<Natural> eval(std::size_t e, const Natural& x, const Natural& budget) const;

    // First registered always-divergent program.
    std::optional<std::size_t> divergent_index() const;

    // Manifest: one program per line, `<builtin> [cost=<k>|cost=x+<k>|cost=<a>x+<k>]`
    // with builtins identity, square, diverge, const:<c>, linear:<a>:<b>,
    // halt-below:<k>. A `budget <n>` line sets the step cap. Default cost is
    // one step per call.
    static FamilyRegistry parse_manifest(std::istream& in);

private:
    std::vector<Program> programs_;
    Natural budget_;
};

// Triples <x,y,z> with x, z <= horizon such that every x' <= x converges by
// step z (halts within z steps with r_e(x') < z) and r_e(x) = y.
WeakRepTable table_of_program(const FamilyRegistry& r, std::size_t e, const Natural& horizon);

// Program 2e computes n -> f_e(n div 2); program 2e+1 is f_e itself.
FamilyRegistry interleave_family(const FamilyRegistry& r);

// F(e) = G(2e). Throws std::out_of_range when G is undefined there.
Natural diagonal_avoid(const FunctionTable& g, const Natural& e);

// ---------------------------------------------------------------------------
// Dominating branch

// The image of a strictly increasing F. Horizon is 1 + the last tabled value.
// Throws std::invalid_argument when F is not strictly increasing.
SetStream image_set(const FunctionTable& f);

// h(n) = 1 + max{ s(i) : i <= (n+1)q }.
Natural dominating_adversary(const Sampler& s, const Natural& q, const Natural& n);

struct DominationCheck {
    Natural h;
    bool hit = false;       // F(n) in s([0,(n+1)q))
    bool dominates = false; // h > F(n)
    bool holds() const { return !hit || dominates; }
};
DominationCheck check_domination(const FunctionTable& f, const Sampler& s, const Natural& q, const Natural& n);

// ---------------------------------------------------------------------------
// DNR-branch codings

// k(n): drop the leading 1 of n, double every remaining bit, append "01".
// Length 2*floor(log2 n) + 2. Throws std::invalid_argument for n = 0.
BitString prefix_free_code(const Natural& n);

struct PrefixFreeDecoded {
    Natural value;
    std::size_t consumed = 0;
};
// Reads one codeword starting at `offset`. Throws std::invalid_argument on a
// "10" pair or a truncated codeword.
PrefixFreeDecoded decode_prefix_free(const BitString& bits, std::size_t offset = 0);

// Smallest w with 2^w >= n^2.
std::size_t fixed_width(const Natural& n);
// c_n(x): x big-endian in fixed_width(n) bits. Needs n >= 2 and x < n^2.
BitString fixed_width_code(const Natural& n, const Natural& x);
Natural decode_fixed_width(const Natural& n, const BitString& bits);

// sigma ^ k(n) ^ c_n(x).
BitString assemble_sigma_n(const BitString& sigma, const Natural& n, const Natural& x);

// (mu y)[<x,y> in X], searching y < budget, defined only if every x' <= x has
// a witness below the budget.
std::optional<Natural> psi_eval(const FiniteSet& x_codes, const Natural& x, const Natural& budget);

using IndexMap = std::map<BitString, std::size_t>;

// `sigma:index` per line (sigma may be empty).
IndexMap read_index_map(std::istream& in);

// Largest L with 2^L < n^5, i.e. |sigma| < 5 log2 n.
std::size_t sigma_length_bound(const Natural& n);

// 1 + max over binary sigma with 2^|sigma| < n^5 of <e(sigma), g(e(sigma))>.
// Strings missing from e_of map to the registry's divergent program. Needs
// n >= 2; throws std::invalid_argument when the registry has no divergent
// program but one is needed, an index is unregistered, or g has a gap.
Natural p_bound(const FamilyRegistry& r, const IndexMap& e_of, const FunctionTable& g, const Natural& n);

// {string_code(A|p(n)) : n in checkpoints} with A the graph of g over its table.
FiniteSet build_P(const FunctionTable& g, const FamilyRegistry& r, const IndexMap& e_of,
                  const std::vector<Natural>& checkpoints);

} // namespace idensity
