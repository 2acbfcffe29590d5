#include "idensity/natural.hpp"

#include <limits>
#include <stdexcept>

namespace idensity {

Natural parse_natural(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("expected a natural number, got ''");
    for (char c : text)
        if (c < '0' || c > '9')
            throw std::invalid_argument("expected a natural number, got '" + std::string(text) + "'");
    return Natural(std::string(text));
}

std::size_t to_size(const Natural& n) {
    if (n < 0 || n > std::numeric_limits<std::size_t>::max())
        throw std::out_of_range("value " + n.str() + " does not fit in a machine word");
    return n.convert_to<std::size_t>();
}

std::uint64_t to_u64(const Natural& n) {
    if (n < 0 || n > std::numeric_limits<std::uint64_t>::max())
        throw std::out_of_range("value " + n.str() + " does not fit in 64 bits");
    return n.convert_to<std::uint64_t>();
}

} // namespace idensity
