#pragma once

#include <cstdint>

#include <json.hpp>

#include "fairdiv/audits.hpp"
#include "fairdiv/rational.hpp"

namespace fairdiv {

// Searches the space of deterministic two-agent direct mechanisms over
// ternary item values {0, x, y} (y > x > 0 required) for one that is
// dominant-strategy incentive compatible, allocates an efficient bundle at
// every profile, and is NOT a serial dictatorship on the positively-valued
// items.  `verified` means no such mechanism exists; `counterexample` carries
// a full profile->allocation table of one that does; `inconclusive` means the
// node budget ran out first.
//
// m = 1 is settled by exhaustive enumeration of all 2^9 tables.  m = 2 has
// 4^81 tables, so the search pins a violation of each dictatorship pattern
// and runs constraint propagation (pairwise incentive constraints between
// profiles that differ in one agent's bid) with most-constrained-profile
// first backtracking under `node_budget`.

enum class CharacterizationStatus { verified, counterexample, inconclusive };

struct CharacterizationResult {
    CharacterizationStatus status = CharacterizationStatus::inconclusive;
    std::uint64_t survivor_count = 0;  // filled by the m = 1 exhaustive path
    std::uint64_t nodes = 0;           // search effort actually spent
    nlohmann::json counterexample;     // table when status == counterexample

    std::string status_name() const;
};

CharacterizationResult characterization_search(
    int m, const Rational& x, const Rational& y,
    EfficiencyCriterion criterion = EfficiencyCriterion::sd_plus,
    std::uint64_t node_budget = 10'000'000);

}  // namespace fairdiv
