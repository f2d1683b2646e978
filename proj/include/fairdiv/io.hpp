#pragma once

// Instance documents and canonical serialization.  Two schemas share one
// entry point: indivisible goods ({"agents", "items", "values"}) and cake
// ({"agents", "densities"}).  Rationals appear externally as "p/q" strings,
// integer literals, or decimal literals; decimals are converted exactly
// (0.6 -> 3/5), which requires never routing them through doubles.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fairdiv/cake.hpp"
#include "fairdiv/types.hpp"

namespace fairdiv {

struct Instance {
    std::optional<ValuationProfile> goods;
    std::optional<std::vector<PiecewiseDensity>> cake;
};

// Parses either schema, validating invariants (non-negative values,
// rectangular rows, densities integrating to one).  Throws ParseError.
Instance parse_instance(const std::string& text);
Instance load_instance(const std::string& path);

// JSON text -> json with every fractional/exponent number literal re-quoted
// as a string so its decimal digits survive verbatim.
nlohmann::json parse_json_exact(const std::string& text);

// Rational from a JSON value: string ("p/q", decimal) or integer.
Rational rational_from_json(const nlohmann::json& v);
nlohmann::json rational_to_json(const Rational& r);

std::string serialize_instance(const ValuationProfile& v);
std::string serialize_cake_instance(const std::vector<PiecewiseDensity>& densities);

// Allocations externally use 1-indexed agents: [owner_of_item_1, ...].
nlohmann::json allocation_to_json(const Allocation& x);
Allocation allocation_from_string(const std::string& owners, int n, int m);

}  // namespace fairdiv
