#include "idensity/coding.hpp"

#include <stdexcept>

namespace idensity {

namespace mp = boost::multiprecision;

Natural cantor_pair(const Natural& x, const Natural& y) {
    if (x < 0 || y < 0) throw std::invalid_argument("cantor_pair: negative argument");
    const Natural s = x + y;
    return s * (s + 1) / 2 + y;
}

Pair cantor_unpair(const Natural& z) {
    if (z < 0) throw std::invalid_argument("cantor_unpair: negative code");
    // w = floor((sqrt(8z+1) - 1) / 2) is the diagonal x+y.
    Natural w = (mp::sqrt(Natural(8 * z + 1)) - 1) / 2;
    const Natural t = w * (w + 1) / 2;
    const Natural y = z - t;
    return {w - y, y};
}

Natural triple_code(const Triple& t) { return cantor_pair(t.x, cantor_pair(t.y, t.z)); }

Triple triple_decode(const Natural& code) {
    const Pair outer = cantor_unpair(code);
    const Pair inner = cantor_unpair(outer.y);
    return {outer.x, inner.x, inner.y};
}

Natural string_code(const BitString& sigma) {
    Natural value = 0;
    for (bool b : sigma.bits()) {
        value <<= 1;
        if (b) value |= 1;
    }
    return pow2(sigma.size()) + value - 1;
}

std::size_t string_code_length(const Natural& code) {
    if (code < 0) throw std::invalid_argument("string code must be a natural");
    return floor_log2(code + 1);
}

BitString string_decode(const Natural& code) {
    const std::size_t len = string_code_length(code);
    const Natural value = code + 1 - pow2(len);
    std::vector<bool> bits(len);
    for (std::size_t i = 0; i < len; ++i) bits[i] = mp::bit_test(value, static_cast<unsigned>(len - 1 - i));
    return BitString(std::move(bits));
}

bool code_extends(const Natural& code, const Natural& prefix_code) {
    const std::size_t len = string_code_length(code);
    const std::size_t plen = string_code_length(prefix_code);
    if (len < plen) return false;
    const Natural value = code + 1 - pow2(len);
    const Natural pvalue = prefix_code + 1 - pow2(plen);
    return (value >> (len - plen)) == pvalue;
}

Natural finite_set_code(const FiniteSet& d) {
    Natural code = 0;
    for (const Natural& x : d) mp::bit_set(code, static_cast<unsigned>(to_size(x)));
    return code;
}

FiniteSet finite_set_decode(const Natural& code) {
    if (code < 0) throw std::invalid_argument("canonical index must be a natural");
    FiniteSet d;
    if (code == 0) return d;
    const std::size_t top = floor_log2(code);
    for (std::size_t i = 0; i <= top; ++i)
        if (mp::bit_test(code, static_cast<unsigned>(i))) d.insert(Natural(i));
    return d;
}

} // namespace idensity
