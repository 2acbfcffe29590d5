#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "idensity/natural.hpp"

namespace idensity {

// A total function on [0, size()) given by its values.
class FunctionTable {
public:
    FunctionTable() = default;
    explicit FunctionTable(std::vector<Natural> values, std::string spec = "table")
        : values_(std::move(values)), spec_(std::move(spec)) {}

    std::size_t size() const noexcept { return values_.size(); }
    bool defined_at(const Natural& x) const { return x >= 0 && x < values_.size(); }
    // Throws std::out_of_range outside the table.
    const Natural& operator()(const Natural& x) const;
    std::optional<Natural> try_at(const Natural& x) const;

    const std::vector<Natural>& values() const noexcept { return values_; }
    const std::string& spec() const noexcept { return spec_; }
    bool strictly_increasing() const;

    // `identity | const:<c> | pow2 | square | factorial | list:<v0,v1,...> |
    //  file:<path> | seed:<u64>:<bound>`. `list:` and `file:` fix their own
    // length; the others are tabulated on [0, length). `seed` values are
    // splitmix64_at(seed, x) mod bound.
    static FunctionTable parse(std::string_view spec, std::size_t length);

private:
    std::vector<Natural> values_;
    std::string spec_;
};

// Reads naturals separated by commas and/or whitespace.
std::vector<Natural> read_natural_list(const std::string& path);
std::vector<Natural> parse_natural_csv(std::string_view text);

} // namespace idensity
