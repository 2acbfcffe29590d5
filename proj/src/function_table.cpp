#include "idensity/function_table.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "idensity/set_stream.hpp"

namespace idensity {

const Natural& FunctionTable::operator()(const Natural& x) const {
    if (!defined_at(x))
        throw std::out_of_range("function '" + spec_ + "' undefined at " + x.str() + " (table size " +
                                std::to_string(values_.size()) + ")");
    return values_[x.convert_to<std::size_t>()];
}

std::optional<Natural> FunctionTable::try_at(const Natural& x) const {
    if (!defined_at(x)) return std::nullopt;
    return values_[x.convert_to<std::size_t>()];
}

bool FunctionTable::strictly_increasing() const {
    for (std::size_t i = 1; i < values_.size(); ++i)
        if (values_[i] <= values_[i - 1]) return false;
    return true;
}

std::vector<Natural> parse_natural_csv(std::string_view text) {
    std::vector<Natural> out;
    std::string token;
    auto flush = [&] {
        if (!token.empty()) out.push_back(parse_natural(token));
        token.clear();
    };
    for (char c : text) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c)))
            flush();
        else
            token.push_back(c);
    }
    flush();
    return out;
}

std::vector<Natural> read_natural_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_natural_csv(buffer.str());
}

FunctionTable FunctionTable::parse(std::string_view spec, std::size_t length) {
    const std::string name(spec);
    std::vector<Natural> values;
    auto tabulate = [&](auto&& f) {
        values.reserve(length);
        for (std::size_t x = 0; x < length; ++x) values.push_back(f(x));
    };

    const std::size_t colon = spec.find(':');
    const std::string_view kind = spec.substr(0, colon);
    const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);

    if (spec == "identity") {
        tabulate([](std::size_t x) { return Natural(x); });
    } else if (spec == "pow2") {
        tabulate([](std::size_t x) { return pow2(x); });
    } else if (spec == "square") {
        tabulate([](std::size_t x) { return Natural(x) * x; });
    } else if (spec == "factorial") {
        tabulate([](std::size_t x) { return factorial(static_cast<unsigned>(x)); });
    } else if (kind == "const" && colon != std::string_view::npos) {
        const Natural c = parse_natural(rest);
        tabulate([&](std::size_t) { return c; });
    } else if (kind == "list" && colon != std::string_view::npos) {
        values = parse_natural_csv(rest);
    } else if (kind == "file" && colon != std::string_view::npos) {
        values = read_natural_list(std::string(rest));
    } else if (kind == "seed" && colon != std::string_view::npos) {
        const std::size_t sep = rest.find(':');
        if (sep == std::string_view::npos) throw std::invalid_argument("seed function needs seed:<u64>:<bound>");
        const std::uint64_t seed = to_u64(parse_natural(rest.substr(0, sep)));
        const std::uint64_t bound = to_u64(parse_natural(rest.substr(sep + 1)));
        if (bound == 0) throw std::invalid_argument("seed function bound must be positive");
        tabulate([&](std::size_t x) { return Natural(splitmix64_at(seed, x) % bound); });
    } else {
        throw std::invalid_argument("unknown function spec '" + name + "'");
    }
    return FunctionTable(std::move(values), name);
}

} // namespace idensity
