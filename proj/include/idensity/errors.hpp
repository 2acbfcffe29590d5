#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace idensity {

// A query at or beyond a stream's evaluation horizon (or at n = 0 where a
// positive count is required).
class HorizonError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// A sampler evaluated outside [0, domain_bound).
class DomainError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// A sampler produced the same value at two distinct arguments.
class InjectivityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// principal_function asked for an element the horizon does not reach.
class InsufficientElements : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Two prefix strings disagree at `position`.
class InconsistencyError : public std::runtime_error {
public:
    InconsistencyError(std::size_t position, const std::string& what)
        : std::runtime_error(what), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

} // namespace idensity
