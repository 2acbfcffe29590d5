#pragma once

#include <vector>

#include "idensity/bit_string.hpp"
#include "idensity/natural.hpp"
#include "idensity/set_stream.hpp"

namespace idensity {

// Partial densities of a stream at a list of checkpoints. Only what was
// observed: sup and inf are over the listed values, not limits.
struct DensityProfile {
    Natural horizon;
    std::vector<Natural> checkpoints;
    std::vector<Rational> values;
    Rational observed_sup;
    Rational observed_inf;
};

// |S|n| = |{j < n : j in S}|. Requires n <= horizon.
Natural count_below(const SetStream& s, const Natural& n);

// |S|n| / n. Throws HorizonError when n = 0 or n > horizon.
Rational partial_density(const SetStream& s, const Natural& n);

// Throws std::invalid_argument for an empty or non-increasing list and
// HorizonError for an out-of-horizon checkpoint.
DensityProfile density_profile(const SetStream& s, const std::vector<Natural>& checkpoints);

// p_S(j): the j-th element of S (0-indexed). Throws InsufficientElements if S
// has fewer than j+1 elements below its horizon.
Natural principal_function(const SetStream& s, const Natural& j);

// The characteristic bits S|n.
BitString restriction(const SetStream& s, const Natural& n);

} // namespace idensity
