#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "idensity/coding.hpp"
#include "idensity/natural.hpp"
#include "idensity/set_stream.hpp"

namespace idensity {

enum class SamplerKind { injection, permutation };

const char* to_string(SamplerKind kind);

// A total computable injection (or permutation) on [0, domain_bound).
//
// Every evaluation is logged; a value produced at two distinct arguments is a
// hard InjectivityError. Copies share the log, which is mutex-guarded, so
// results do not depend on the order or thread of evaluation.
class Sampler {
public:
    using Program = std::function<Natural(const Natural&)>;

    Sampler(std::string name, SamplerKind kind, Natural domain_bound, Program program);

    const std::string& name() const noexcept;
    SamplerKind kind() const noexcept;
    const Natural& domain_bound() const noexcept;

    // Throws DomainError for x outside [0, domain_bound).
    Natural operator()(const Natural& x) const;

    static Sampler identity(Natural domain_bound);
    static Sampler doubling(Natural domain_bound);
    static Sampler shift(Natural k, Natural domain_bound);
    // Swaps [0,k) with [k,2k); identity elsewhere.
    static Sampler swap_blocks(Natural k, Natural domain_bound);
    // A finite table; tagged permutation iff it is a bijection of
    // [0, size). Repeated values are rejected up front.
    static Sampler from_table(std::vector<Natural> table, std::string name = "table");
    // `prefix` must be a permutation of [0, prefix.size()); extended by the
    // identity on [prefix.size(), domain_bound).
    static Sampler finite_support(std::vector<Natural> prefix, Natural domain_bound, std::string name = "finite-support");

    // `identity | double | shift:<k> | table:<csv-path> | swapblocks:<k>`.
    // Table samplers take their domain from the file.
    static Sampler parse(std::string_view spec, const Natural& domain_bound);

private:
    struct State;
    std::shared_ptr<State> state_;
};

Natural eval_sampler(const Sampler& s, const Natural& x);

// {s(0), ..., s(n-1)}; n <= domain_bound.
FiniteSet image_interval(const Sampler& s, const Natural& n);

// |{j < n : s(j) in S}| / n. Needs 1 <= n <= domain_bound and every s(j)
// below the stream's horizon.
Rational preimage_partial_density(const SetStream& set, const Sampler& s, const Natural& n);

} // namespace idensity
