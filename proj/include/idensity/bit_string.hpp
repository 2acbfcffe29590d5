#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace idensity {

// A finite binary string, e.g. a prefix A|n of a set's characteristic
// sequence. Position 0 is the first (leftmost) bit.
class BitString {
public:
    BitString() = default;
    explicit BitString(std::vector<bool> bits) : bits_(std::move(bits)) {}

    // Accepts only '0' and '1'; throws std::invalid_argument otherwise.
    static BitString parse(std::string_view text);

    std::size_t size() const noexcept { return bits_.size(); }
    bool empty() const noexcept { return bits_.empty(); }
    bool operator[](std::size_t i) const { return bits_[i]; }
    bool at(std::size_t i) const { return bits_.at(i); }

    void push_back(bool bit) { bits_.push_back(bit); }
    BitString& operator+=(const BitString& other);
    friend BitString operator+(BitString lhs, const BitString& rhs) { return lhs += rhs; }

    BitString prefix(std::size_t length) const;
    bool is_prefix_of(const BitString& other) const;
    std::size_t count_ones() const;

    std::string str() const;
    const std::vector<bool>& bits() const noexcept { return bits_; }

    friend bool operator==(const BitString&, const BitString&) = default;
    // Length-lexicographic order, matching string codes.
    friend std::strong_ordering operator<=>(const BitString& a, const BitString& b);

private:
    std::vector<bool> bits_;
};

} // namespace idensity
