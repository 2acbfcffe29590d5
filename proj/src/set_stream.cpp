#include "idensity/set_stream.hpp"

#include <cctype>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "idensity/errors.hpp"

namespace idensity {

namespace {

// Indices below this are memoized; larger ones are recomputed on demand.
constexpr std::size_t kMemoLimit = std::size_t{1} << 22;

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

std::uint64_t parse_u64(std::string_view text) { return to_u64(parse_natural(text)); }

} // namespace

std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

bool seeded_bit(std::uint64_t seed, std::uint64_t index, std::uint64_t num, std::uint64_t den) {
    const unsigned __int128 scaled = static_cast<unsigned __int128>(splitmix64_at(seed, index)) * den;
    return static_cast<std::uint64_t>(scaled >> 64) < num;
}

struct SetStream::State {
    std::string spec;
    Natural horizon;
    Predicate member;
    std::mutex mutex;
    std::vector<std::int8_t> memo; // -1 unknown, else 0/1
};

SetStream::SetStream(std::string spec, Natural horizon, Predicate member)
    : state_(std::make_shared<State>()) {
    if (horizon < 0) throw std::invalid_argument("horizon must be a natural");
    state_->spec = std::move(spec);
    state_->horizon = std::move(horizon);
    state_->member = std::move(member);
}

const std::string& SetStream::spec() const noexcept { return state_->spec; }
const Natural& SetStream::horizon() const noexcept { return state_->horizon; }

bool SetStream::contains(const Natural& i) const {
    if (i < 0 || i >= state_->horizon)
        throw HorizonError("index " + i.str() + " outside horizon " + state_->horizon.str() + " of '" +
                           state_->spec + "'");
    if (i >= kMemoLimit) return state_->member(i);

    const auto slot = i.convert_to<std::size_t>();
    {
        std::lock_guard lock(state_->mutex);
        if (slot < state_->memo.size() && state_->memo[slot] >= 0) return state_->memo[slot] == 1;
    }
    const bool bit = state_->member(i);
    std::lock_guard lock(state_->mutex);
    if (slot >= state_->memo.size()) state_->memo.resize(std::max(slot + 1, state_->memo.size() * 2), -1);
    state_->memo[slot] = bit ? 1 : 0;
    return bit;
}

SetStream SetStream::empty(Natural horizon) {
    return SetStream("empty", std::move(horizon), [](const Natural&) { return false; });
}

SetStream SetStream::full(Natural horizon) {
    return SetStream("full", std::move(horizon), [](const Natural&) { return true; });
}

SetStream SetStream::evens(Natural horizon) {
    return SetStream("evens", std::move(horizon), [](const Natural& i) { return !boost::multiprecision::bit_test(i, 0); });
}

SetStream SetStream::odds(Natural horizon) {
    return SetStream("odds", std::move(horizon), [](const Natural& i) { return boost::multiprecision::bit_test(i, 0); });
}

SetStream SetStream::seeded(std::uint64_t seed, Natural horizon, std::uint64_t num, std::uint64_t den) {
    if (den == 0 || num > den) throw std::invalid_argument("seed stream density must satisfy 0 <= num/den <= 1");
    const Natural cap = Natural(std::numeric_limits<std::uint64_t>::max());
    if (horizon > cap) horizon = cap;
    std::string spec = "seed:" + std::to_string(seed);
    if (!(num == 1 && den == 2)) spec += ":p=" + std::to_string(num) + "/" + std::to_string(den);
    return SetStream(std::move(spec), std::move(horizon), [seed, num, den](const Natural& i) {
        return seeded_bit(seed, i.convert_to<std::uint64_t>(), num, den);
    });
}

SetStream SetStream::from_bits(const BitString& bits, std::string spec) {
    auto shared = std::make_shared<const BitString>(bits);
    return SetStream(std::move(spec), Natural(bits.size()),
                     [shared](const Natural& i) { return (*shared)[i.convert_to<std::size_t>()]; });
}

SetStream SetStream::from_members(FiniteSet members, Natural horizon, std::string spec) {
    auto shared = std::make_shared<const FiniteSet>(std::move(members));
    return SetStream(std::move(spec), std::move(horizon), [shared](const Natural& i) { return shared->count(i) > 0; });
}

SetStream SetStream::parse(std::string_view spec, const Natural& horizon) {
    if (spec == "empty") return empty(horizon);
    if (spec == "full") return full(horizon);
    if (spec == "evens") return evens(horizon);
    if (spec == "odds") return odds(horizon);

    const std::size_t colon = spec.find(':');
    if (colon == std::string_view::npos) throw std::invalid_argument("unknown set spec '" + std::string(spec) + "'");
    const std::string_view kind = spec.substr(0, colon);
    const std::string_view rest = spec.substr(colon + 1);

    if (kind == "seed") {
        const auto parts = split(rest, ':');
        if (parts.size() > 2) throw std::invalid_argument("bad seed spec '" + std::string(spec) + "'");
        const std::uint64_t seed = parse_u64(parts[0]);
        std::uint64_t num = 1, den = 2;
        if (parts.size() == 2) {
            const std::string_view p = parts[1];
            const std::size_t slash = p.find('/');
            if (p.substr(0, 2) != "p=" || slash == std::string_view::npos)
                throw std::invalid_argument("bad density in seed spec '" + std::string(spec) + "'");
            num = parse_u64(p.substr(2, slash - 2));
            den = parse_u64(p.substr(slash + 1));
        }
        return seeded(seed, horizon, num, den);
    }
    if (kind == "list") {
        FiniteSet members;
        if (!rest.empty())
            for (auto part : split(rest, ',')) members.insert(parse_natural(part));
        return from_members(std::move(members), horizon, std::string(spec));
    }
    if (kind == "file") {
        std::ifstream in{std::string(rest)};
        if (!in) throw std::invalid_argument("cannot open set file '" + std::string(rest) + "'");
        std::string text;
        char c;
        while (in.get(c))
            if (!std::isspace(static_cast<unsigned char>(c))) text.push_back(c);
        return from_bits(BitString::parse(text), std::string(spec));
    }
    throw std::invalid_argument("unknown set spec '" + std::string(spec) + "'");
}

SetStream complement(const SetStream& s) {
    return SetStream("complement(" + s.spec() + ")", s.horizon(), [s](const Natural& i) { return !s.contains(i); });
}

} // namespace idensity
