#include "idensity/density.hpp"

#include <algorithm>
#include <stdexcept>

#include "idensity/errors.hpp"

namespace idensity {

Natural count_below(const SetStream& s, const Natural& n) {
    if (n < 0 || n > s.horizon())
        throw HorizonError("count below " + n.str() + " exceeds horizon " + s.horizon().str());
    Natural count = 0;
    for (Natural i = 0; i < n; ++i)
        if (s.contains(i)) ++count;
    return count;
}

Rational partial_density(const SetStream& s, const Natural& n) {
    if (n <= 0) throw HorizonError("partial density needs n >= 1");
    return Rational(count_below(s, n), n);
}

DensityProfile density_profile(const SetStream& s, const std::vector<Natural>& checkpoints) {
    if (checkpoints.empty()) throw std::invalid_argument("density profile needs at least one checkpoint");
    for (std::size_t i = 1; i < checkpoints.size(); ++i)
        if (checkpoints[i] <= checkpoints[i - 1])
            throw std::invalid_argument("checkpoints must be strictly increasing");
    if (checkpoints.back() > s.horizon())
        throw HorizonError("checkpoint " + checkpoints.back().str() + " exceeds horizon " + s.horizon().str());
    if (checkpoints.front() <= 0) throw HorizonError("partial density needs n >= 1");

    DensityProfile profile;
    profile.horizon = s.horizon();
    profile.checkpoints = checkpoints;
    // One pass over [0, last checkpoint).
    Natural count = 0;
    Natural i = 0;
    for (const Natural& n : checkpoints) {
        for (; i < n; ++i)
            if (s.contains(i)) ++count;
        profile.values.emplace_back(count, n);
    }
    profile.observed_sup = *std::max_element(profile.values.begin(), profile.values.end());
    profile.observed_inf = *std::min_element(profile.values.begin(), profile.values.end());
    return profile;
}

Natural principal_function(const SetStream& s, const Natural& j) {
    if (j < 0) throw std::invalid_argument("principal function index must be a natural");
    Natural seen = 0;
    for (Natural i = 0; i < s.horizon(); ++i) {
        if (s.contains(i)) {
            if (seen == j) return i;
            ++seen;
        }
    }
    throw InsufficientElements("'" + s.spec() + "' has only " + seen.str() + " elements below horizon " +
                               s.horizon().str() + ", element " + j.str() + " requested");
}

BitString restriction(const SetStream& s, const Natural& n) {
    if (n < 0 || n > s.horizon())
        throw HorizonError("restriction to " + n.str() + " exceeds horizon " + s.horizon().str());
    const std::size_t len = to_size(n);
    std::vector<bool> bits(len);
    for (std::size_t i = 0; i < len; ++i) bits[i] = s.contains(Natural(i));
    return BitString(std::move(bits));
}

} // namespace idensity
