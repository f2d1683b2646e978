#pragma once

// Core value types for indivisible-goods instances.  Everything is 0-indexed
// internally; the I/O layer shifts to the 1-indexed external convention.

#include <vector>

#include "fairdiv/rational.hpp"

namespace fairdiv {

// A set of item indices, kept sorted and duplicate-free.
struct Bundle {
    std::vector<int> items;

    bool contains(int j) const;
    static Bundle from_mask(unsigned mask, int m);
    unsigned to_mask() const;
};

bool operator==(const Bundle& a, const Bundle& b);

// Non-negative additive valuations, one row per agent.
struct ValuationProfile {
    std::vector<std::vector<Rational>> values;

    int n() const { return static_cast<int>(values.size()); }
    int m() const { return values.empty() ? 0 : static_cast<int>(values[0].size()); }
    const std::vector<Rational>& row(int i) const { return values[i]; }

    // Rectangular, non-empty, all entries >= 0.
    void validate() const;
};

// A complete assignment: owner[j] is the agent holding item j.
struct Allocation {
    int num_agents = 0;
    std::vector<int> owner;

    Bundle bundle_of(int agent) const;
    unsigned mask_of(int agent) const;
};

bool operator==(const Allocation& a, const Allocation& b);

// An ordinal report: a strict preference order over all items (order[k] is
// the item ranked k+1-th) plus the number of items reported as positively
// valued -- exactly the first positive_count entries of the order.
struct OrdinalReport {
    std::vector<int> order;
    int positive_count = 0;

    void validate(int m) const;
};

bool operator==(const OrdinalReport& a, const OrdinalReport& b);

// Ranks items by decreasing value, ties broken by increasing item index;
// positive_count is the number of strictly positive entries.
OrdinalReport preference_order(const std::vector<Rational>& row);

Rational utility(const std::vector<Rational>& row, const Bundle& b);
Rational utility_mask(const std::vector<Rational>& row, unsigned mask);
std::vector<Rational> utility_vector(const ValuationProfile& v, const Allocation& x);

}  // namespace fairdiv
