#include "idensity/bit_string.hpp"

#include <algorithm>
#include <stdexcept>

namespace idensity {

BitString BitString::parse(std::string_view text) {
    BitString s;
    s.bits_.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1')
            throw std::invalid_argument("not a binary string: '" + std::string(text) + "'");
        s.bits_.push_back(c == '1');
    }
    return s;
}

BitString& BitString::operator+=(const BitString& other) {
    bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
    return *this;
}

BitString BitString::prefix(std::size_t length) const {
    if (length > bits_.size()) throw std::out_of_range("prefix longer than string");
    return BitString(std::vector<bool>(bits_.begin(), bits_.begin() + static_cast<std::ptrdiff_t>(length)));
}

bool BitString::is_prefix_of(const BitString& other) const {
    return size() <= other.size() && std::equal(bits_.begin(), bits_.end(), other.bits_.begin());
}

std::size_t BitString::count_ones() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true));
}

std::string BitString::str() const {
    std::string out;
    out.reserve(bits_.size());
    for (bool b : bits_) out.push_back(b ? '1' : '0');
    return out;
}

std::strong_ordering operator<=>(const BitString& a, const BitString& b) {
    if (auto c = a.size() <=> b.size(); c != 0) return c;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) return a[i] ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    return std::strong_ordering::equal;
}

} // namespace idensity
