#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace idensity {

// Arbitrary-precision natural numbers and exact rationals. Factorial
// checkpoints and prefix codes (~2^len) leave the 64-bit range quickly.
using Natural = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Natural pow2(std::size_t exponent) {
    Natural r = 1;
    r <<= exponent;
    return r;
}

// floor(log2 n) for n >= 1.
inline std::size_t floor_log2(const Natural& n) {
    return static_cast<std::size_t>(boost::multiprecision::msb(n));
}

inline Natural factorial(unsigned n) {
    Natural r = 1;
    for (unsigned k = 2; k <= n; ++k) r *= k;
    return r;
}

inline std::string to_string(const Natural& n) { return n.str(); }

// "p/q" in lowest terms, or "p" when the denominator is 1.
inline std::string to_string(const Rational& r) {
    const Natural num = boost::multiprecision::numerator(r);
    const Natural den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

// Parses a decimal natural; throws std::invalid_argument on anything else.
Natural parse_natural(std::string_view text);

// Narrowing conversion that throws std::out_of_range when the value does not
// fit. Used where a natural indexes an in-memory structure.
std::size_t to_size(const Natural& n);
std::uint64_t to_u64(const Natural& n);

} // namespace idensity
