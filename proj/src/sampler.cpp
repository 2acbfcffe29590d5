#include "idensity/sampler.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

#include "idensity/errors.hpp"
#include "idensity/function_table.hpp"

namespace idensity {

const char* to_string(SamplerKind kind) {
    return kind == SamplerKind::permutation ? "permutation" : "injection";
}

struct Sampler::State {
    std::string name;
    SamplerKind kind;
    Natural domain_bound;
    Program program;

    std::mutex mutex;
    std::map<Natural, Natural> value_of;    // argument -> value
    std::map<Natural, Natural> argument_of; // value -> argument
};

Sampler::Sampler(std::string name, SamplerKind kind, Natural domain_bound, Program program)
    : state_(std::make_shared<State>()) {
    if (domain_bound < 0) throw std::invalid_argument("domain bound must be a natural");
    state_->name = std::move(name);
    state_->kind = kind;
    state_->domain_bound = std::move(domain_bound);
    state_->program = std::move(program);
}

const std::string& Sampler::name() const noexcept { return state_->name; }
SamplerKind Sampler::kind() const noexcept { return state_->kind; }
const Natural& Sampler::domain_bound() const noexcept { return state_->domain_bound; }

Natural Sampler::operator()(const Natural& x) const {
    if (x < 0 || x >= state_->domain_bound)
        throw DomainError("sampler '" + state_->name + "' evaluated at " + x.str() + " outside domain [0," +
                          state_->domain_bound.str() + ")");
    {
        std::lock_guard lock(state_->mutex);
        if (auto it = state_->value_of.find(x); it != state_->value_of.end()) return it->second;
    }
    Natural value = state_->program(x);
    if (value < 0) throw std::logic_error("sampler '" + state_->name + "' produced a negative value");

    std::lock_guard lock(state_->mutex);
    auto [it, inserted] = state_->argument_of.emplace(value, x);
    if (!inserted && it->second != x)
        throw InjectivityError("sampler '" + state_->name + "' is not injective: s(" + it->second.str() +
                               ") = s(" + x.str() + ") = " + value.str());
    state_->value_of.emplace(x, value);
    return value;
}

Sampler Sampler::identity(Natural domain_bound) {
    return Sampler("identity", SamplerKind::permutation, std::move(domain_bound), [](const Natural& x) { return x; });
}

Sampler Sampler::doubling(Natural domain_bound) {
    return Sampler("double", SamplerKind::injection, std::move(domain_bound), [](const Natural& x) { return 2 * x; });
}

Sampler Sampler::shift(Natural k, Natural domain_bound) {
    if (k < 0) throw std::invalid_argument("shift amount must be a natural");
    std::string name = "shift:" + k.str();
    return Sampler(std::move(name), SamplerKind::injection, std::move(domain_bound),
                   [k](const Natural& x) { return x + k; });
}

Sampler Sampler::swap_blocks(Natural k, Natural domain_bound) {
    if (k < 0) throw std::invalid_argument("block size must be a natural");
    std::string name = "swapblocks:" + k.str();
    return Sampler(std::move(name), SamplerKind::permutation, std::move(domain_bound), [k](const Natural& x) {
        if (x < k) return Natural(x + k);
        if (x < 2 * k) return Natural(x - k);
        return x;
    });
}

namespace {

bool is_bijection_of_prefix(const std::vector<Natural>& table) {
    std::vector<bool> seen(table.size(), false);
    for (const Natural& v : table) {
        if (v < 0 || v >= table.size()) return false;
        const auto i = v.convert_to<std::size_t>();
        if (seen[i]) return false;
        seen[i] = true;
    }
    return true;
}

void require_distinct(const std::vector<Natural>& table, const std::string& name) {
    std::map<Natural, std::size_t> first;
    for (std::size_t i = 0; i < table.size(); ++i) {
        auto [it, inserted] = first.emplace(table[i], i);
        if (!inserted)
            throw InjectivityError("table '" + name + "' repeats value " + table[i].str() + " at " +
                                   std::to_string(it->second) + " and " + std::to_string(i));
    }
}

} // namespace

Sampler Sampler::from_table(std::vector<Natural> table, std::string name) {
    require_distinct(table, name);
    const SamplerKind kind = is_bijection_of_prefix(table) ? SamplerKind::permutation : SamplerKind::injection;
    const Natural bound(table.size());
    auto shared = std::make_shared<const std::vector<Natural>>(std::move(table));
    return Sampler(std::move(name), kind, bound,
                   [shared](const Natural& x) { return (*shared)[x.convert_to<std::size_t>()]; });
}

Sampler Sampler::finite_support(std::vector<Natural> prefix, Natural domain_bound, std::string name) {
    if (!is_bijection_of_prefix(prefix))
        throw std::invalid_argument("finite-support permutation must permute [0," + std::to_string(prefix.size()) + ")");
    if (domain_bound < prefix.size()) throw std::invalid_argument("domain bound smaller than permuted block");
    auto shared = std::make_shared<const std::vector<Natural>>(std::move(prefix));
    return Sampler(std::move(name), SamplerKind::permutation, std::move(domain_bound), [shared](const Natural& x) {
        if (x < shared->size()) return (*shared)[x.convert_to<std::size_t>()];
        return x;
    });
}

Sampler Sampler::parse(std::string_view spec, const Natural& domain_bound) {
    if (spec == "identity") return identity(domain_bound);
    if (spec == "double") return doubling(domain_bound);
    const std::size_t colon = spec.find(':');
    if (colon != std::string_view::npos) {
        const std::string_view kind = spec.substr(0, colon);
        const std::string_view arg = spec.substr(colon + 1);
        if (kind == "shift") return shift(parse_natural(arg), domain_bound);
        if (kind == "swapblocks") return swap_blocks(parse_natural(arg), domain_bound);
        if (kind == "table") return from_table(read_natural_list(std::string(arg)), std::string(spec));
    }
    throw std::invalid_argument("unknown sampler spec '" + std::string(spec) + "'");
}

Natural eval_sampler(const Sampler& s, const Natural& x) { return s(x); }

FiniteSet image_interval(const Sampler& s, const Natural& n) {
    if (n < 0 || n > s.domain_bound())
        throw DomainError("image interval [0," + n.str() + ") exceeds domain of '" + s.name() + "'");
    FiniteSet image;
    for (Natural j = 0; j < n; ++j) image.insert(s(j));
    return image;
}

Rational preimage_partial_density(const SetStream& set, const Sampler& s, const Natural& n) {
    if (n <= 0) throw HorizonError("preimage density needs n >= 1");
    if (n > s.domain_bound())
        throw DomainError("checkpoint " + n.str() + " exceeds domain of '" + s.name() + "'");
    Natural hits = 0;
    for (Natural j = 0; j < n; ++j)
        if (set.contains(s(j))) ++hits;
    return Rational(hits, n);
}

} // namespace idensity
