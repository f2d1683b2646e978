#pragma once

// Fairness and efficiency predicates with machine-checkable witnesses.

#include <cstdint>
#include <optional>
#include <utility>

#include <json.hpp>

#include "fairdiv/types.hpp"
#include "fairdiv/welfare.hpp"

namespace fairdiv {

enum class DominanceMode { SD, SD_PLUS };

// Relation of bundle a to bundle b for one agent:
//   strict       a dominates b and they differ on the relevant item set,
//   weak         a dominates b and they agree on the relevant item set,
//   incomparable a does not dominate b (b may well dominate a; swap to ask).
enum class Dominance { strict, weak, incomparable };

// Prefix-count dominance along the agent's preference order.  SD compares
// all m prefixes; SD_PLUS only the prefixes covering positively valued
// items, so items the agent values at zero never matter.
Dominance dominates(const std::vector<Rational>& row, const Bundle& a, const Bundle& b,
                    DominanceMode mode);

enum class EfficiencyCriterion { pareto, sd, sd_plus };

struct AuditReport {
    std::string predicate;
    bool verdict = false;
    nlohmann::json witness;  // structured counterexample, null when none

    // Typed views of the witness for programmatic re-verification.
    std::optional<Allocation> witness_allocation;
    std::optional<std::pair<int, int>> witness_pair;  // 0-indexed agents
    std::optional<int> witness_agent;
    std::optional<std::vector<std::vector<Rational>>> witness_fractional;

    nlohmann::json to_json() const;
};

// Envy-freeness up to one good: i may envy j only if dropping some single
// item from X_j kills the envy; pairs with empty X_j are vacuously fine.
AuditReport is_ef1(const ValuationProfile& v, const Allocation& x);

AuditReport is_envy_free(const ValuationProfile& v, const Allocation& x);

// Brute-force search over all n^m complete allocations, in owner-vector
// counting order, for one that dominates x under the criterion (every agent
// weakly better, at least one strictly).  Throws CapExceeded past the cap.
AuditReport is_efficient(const ValuationProfile& v, const Allocation& x,
                         EfficiencyCriterion criterion, std::uint64_t cap = 10'000'000);

// Fractional Pareto optimality via an exact LP: maximise the total utility
// slack over fractional allocations that weakly dominate x; x is fPO iff the
// optimum is zero.  The witness is the dominating fractional matrix.
AuditReport is_fpo(const ValuationProfile& v, const Allocation& x);

// Independent route for tiny instances (n*m <= 12): evaluates the same LP by
// enumerating every basic feasible solution.  Used to cross-check is_fpo.
bool is_fpo_by_vertex_enumeration(const ValuationProfile& v, const Allocation& x);

// Every agent with at least n positively valued items gets positive utility.
AuditReport is_fulfilling(const ValuationProfile& v, const Allocation& x);

// Checks f(x) <= f(y) where y must arise from x by a progressive transfer:
// exactly two coordinates change, their sum is preserved, and the donor
// stays above the recipient's old value.  Throws ConfigError otherwise.
AuditReport pdp_holds(const WelfareFn& f, const std::vector<Rational>& x,
                      const std::vector<Rational>& y);

}  // namespace fairdiv
