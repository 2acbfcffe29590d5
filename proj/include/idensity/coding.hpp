#pragma once

#include <cstddef>
#include <set>

#include "idensity/bit_string.hpp"
#include "idensity/natural.hpp"

namespace idensity {

using FiniteSet = std::set<Natural>;

// Cantor pairing <x,y> = (x+y)(x+y+1)/2 + y. Monotone in each argument.
Natural cantor_pair(const Natural& x, const Natural& y);

struct Pair {
    Natural x;
    Natural y;
    friend bool operator==(const Pair&, const Pair&) = default;
};
Pair cantor_unpair(const Natural& z);

// <x,y,z> = <x,<y,z>>.
struct Triple {
    Natural x;
    Natural y;
    Natural z;
    friend bool operator==(const Triple&, const Triple&) = default;
    friend bool operator<(const Triple& a, const Triple& b) {
        if (a.x != b.x) return a.x < b.x;
        if (a.y != b.y) return a.y < b.y;
        return a.z < b.z;
    }
};
Natural triple_code(const Triple& t);
Triple triple_decode(const Natural& code);

// Length-lexicographic string code: 2^len + value(sigma) - 1.
Natural string_code(const BitString& sigma);
BitString string_decode(const Natural& code);

// Length of the string with the given code, without materializing it.
std::size_t string_code_length(const Natural& code);

// True iff the string coded by `code` extends (or equals) the string coded by
// `prefix_code`. Pure arithmetic on the codes.
bool code_extends(const Natural& code, const Natural& prefix_code);

// Canonical index of a finite set: sum of 2^x.
Natural finite_set_code(const FiniteSet& d);
FiniteSet finite_set_decode(const Natural& code);

} // namespace idensity
