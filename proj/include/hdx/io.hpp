#pragma once

#include "hdx/chains.hpp"
#include "hdx/cones.hpp"
#include "hdx/simplicial.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>

namespace hdx::io {

using Json = nlohmann::json;

// Exact rationals travel as "p/q" strings, always with an explicit denominator.
std::string rational_string(const Rational& r);
Rational parse_rational(const std::string& text);

// {"vertices":[labels],"maximal_faces":[[indices]]}. Loading keeps the stored vertex numbering.
Json complex_to_json(const Complex& X);
Complex complex_from_json(const Json& j);

// {"degree":k,"entries":[{"simplex":[...],"coeff":c}]}
template <class Tag>
Json chain_to_json(const SparseSimplicial<Tag>& c) {
    Json entries = Json::array();
    for (const auto& [f, coeff] : c.terms()) entries.push_back({{"simplex", f}, {"coeff", coeff}});
    return {{"degree", c.degree()}, {"entries", std::move(entries)}};
}
Chain chain_from_json(const Json& j, std::int64_t modulus);
Cochain cochain_from_json(const Json& j, std::int64_t modulus);

// {"apex":v,"k":k,"coeff":"Z"|"Z/m"|[...],"table":[{"simplex":[...],"chain":[...]}]}
// With a list of summands, each chain coefficient is a tuple with one entry per summand.
Json cone_to_json(const ConeFunction& c);
Json cone_to_json(const GroupCone& c);
GroupCone cone_from_json(const Json& j);

Json radius_to_json(const RadiusProfile& r);
Json ledger_to_json(const FiltrationLedger& ledger);

// Two-space indentation, sorted keys, trailing newline: identical inputs give identical bytes.
std::string dump(const Json& j);
Json read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const Json& j);

}  // namespace hdx::io
