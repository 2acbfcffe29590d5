#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "idensity/bit_string.hpp"
#include "idensity/coding.hpp"
#include "idensity/natural.hpp"

namespace idensity {

// Seeded bit source used by `seed:` streams. Bit i is drawn from
//   z = seed + (i + 1) * 0x9E3779B97F4A7C15          (mod 2^64)
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   z =  z ^ (z >> 31)
// and is 1 iff floor(z * den / 2^64) < num. Random access, so the stream is
// identical regardless of evaluation order.
std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t index);
bool seeded_bit(std::uint64_t seed, std::uint64_t index, std::uint64_t num, std::uint64_t den);

// A deterministic characteristic function on [0, horizon). Copies share one
// memo table; memoization is internally synchronized.
class SetStream {
public:
    using Predicate = std::function<bool(const Natural&)>;

    SetStream(std::string spec, Natural horizon, Predicate member);

    const std::string& spec() const noexcept;
    const Natural& horizon() const noexcept;

    // Throws HorizonError for i >= horizon.
    bool contains(const Natural& i) const;
    bool contains(std::uint64_t i) const { return contains(Natural(i)); }

    static SetStream empty(Natural horizon);
    static SetStream full(Natural horizon);
    static SetStream evens(Natural horizon);
    static SetStream odds(Natural horizon);
    static SetStream seeded(std::uint64_t seed, Natural horizon, std::uint64_t num = 1, std::uint64_t den = 2);
    static SetStream from_bits(const BitString& bits, std::string spec = "bits");
    static SetStream from_members(FiniteSet members, Natural horizon, std::string spec = "list");

    // Parses `empty | full | evens | odds | seed:<u64>[:p=<num>/<den>] |
    // file:<path> | list:<n1,n2,...>`. `file:` streams take their horizon from
    // the file; every other form uses `horizon`.
    static SetStream parse(std::string_view spec, const Natural& horizon);

private:
    struct State;
    std::shared_ptr<State> state_;
};

SetStream complement(const SetStream& s);

} // namespace idensity
