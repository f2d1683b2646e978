#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "fairdiv/mechanisms.hpp"
#include "fairdiv/rational.hpp"
#include "fairdiv/types.hpp"

namespace fairdiv {

// Exact interim analysis for ordinal mechanisms: averages the allocation of
// one agent over every profile of opponent reports, where each opponent
// submits a full preference order (positive_count = m) and all orders are
// equally likely.  All probabilities are exact rationals with denominator
// dividing (m!)^(n-1).

inline constexpr std::uint64_t kDefaultInterimCap = 100'000'000;

struct InterimTable {
    int agent = 0;                // 0-indexed
    OrdinalReport report;         // the report the table conditions on
    std::vector<Rational> q;      // q[j] = P(agent receives item j)
    std::uint64_t evaluations = 0;
};

// Enumerates all (m!)^(n-1) opponent order profiles and runs the mechanism on
// each.  Throws ConfigError if the mechanism does not consume ordinal reports
// and CapExceeded if the enumeration needs more than `cap` mechanism runs.
InterimTable interim_allocation(const Mechanism& mech, int agent,
                                const OrdinalReport& report, int n, int m,
                                std::uint64_t cap = kDefaultInterimCap);

struct PositionalInterim {
    int agent = 0;
    bool positional = false;          // rank-only dependence holds
    std::vector<Rational> q_pos;      // by rank (0-indexed rank ell -> q)
    // When !positional: two reports whose interim tables disagree on a rank,
    // or a single report (stored twice) with nonzero mass beyond its
    // positive_count.
    std::optional<std::pair<InterimTable, InterimTable>> counterexample;
};

// Computes interim tables for every report (p, k), p in S_m, k in [0, m], and
// checks that the probability of the rank-ell item depends only on ell (for
// ell <= k) and is 0 for ell > k.
PositionalInterim positional_interim(const Mechanism& mech, int agent, int n,
                                     int m,
                                     std::uint64_t cap = kDefaultInterimCap);

// True iff q_pos is weakly decreasing in rank.
bool check_monotone(const std::vector<Rational>& q_pos);

struct BicAuditResult {
    int agent = 0;
    OrdinalReport truthful_report;
    Rational truthful_eu;
    OrdinalReport best_deviation;     // best report other than the truthful one
    Rational best_deviation_eu;
    bool verdict = false;             // truthful EU >= every deviation EU
};

// Exact Bayesian incentive-compatibility audit: expected utility of every
// report (p, k) against uniformly random full-order opponents, compared with
// the truthful report derived from `true_values`.
BicAuditResult bic_audit_exact(const Mechanism& mech, int agent,
                               const std::vector<Rational>& true_values, int n,
                               std::uint64_t cap = kDefaultInterimCap);

struct DsicViolation {
    std::vector<std::vector<Rational>> profile;  // true valuation rows
    int agent = 0;
    std::vector<Rational> deviation;             // misreported row
    Rational truthful_utility;
    Rational deviation_utility;                  // measured with true values
};

// Exhaustive dominant-strategy audit over a finite value grid: every profile
// in grid^(n*m), every agent, every unilateral deviation within grid^m.
// Returns up to `max_violations` violations (empty means DSIC on the grid).
std::vector<DsicViolation> dsic_audit_grid(const Mechanism& mech,
                                           const std::vector<Rational>& grid,
                                           int n, int m,
                                           std::uint64_t cap = kDefaultInterimCap,
                                           std::size_t max_violations = 16);

// Property helper: with opponents fixed, demoting one item by a single rank in
// the agent's report must never newly award that item to the agent.  Checks
// every opponent order profile and every adjacent demotion in `report`.
// Returns true when no violation exists.
bool check_elementary_monotonicity(const Mechanism& mech, int agent,
                                   const OrdinalReport& report, int n, int m,
                                   std::uint64_t cap = kDefaultInterimCap);

}  // namespace fairdiv
