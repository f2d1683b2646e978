#include "fairdiv/types.hpp"

#include <algorithm>
#include <numeric>

namespace fairdiv {

bool Bundle::contains(int j) const {
    return std::binary_search(items.begin(), items.end(), j);
}

Bundle Bundle::from_mask(unsigned mask, int m) {
    Bundle b;
    for (int j = 0; j < m; ++j)
        if (mask & (1u << j)) b.items.push_back(j);
    return b;
}

unsigned Bundle::to_mask() const {
    unsigned mask = 0;
    for (int j : items) mask |= 1u << j;
    return mask;
}

bool operator==(const Bundle& a, const Bundle& b) { return a.items == b.items; }

void ValuationProfile::validate() const {
    if (values.empty() || values[0].empty())
        throw ParseError("valuation profile must have at least one agent and one item");
    std::size_t m = values[0].size();
    for (const auto& row : values) {
        if (row.size() != m) throw ParseError("valuation rows must have equal length");
        for (const auto& v : row)
            if (v < 0) throw ParseError("negative value in valuation profile");
    }
}

Bundle Allocation::bundle_of(int agent) const {
    Bundle b;
    for (int j = 0; j < static_cast<int>(owner.size()); ++j)
        if (owner[j] == agent) b.items.push_back(j);
    return b;
}

unsigned Allocation::mask_of(int agent) const {
    unsigned mask = 0;
    for (int j = 0; j < static_cast<int>(owner.size()); ++j)
        if (owner[j] == agent) mask |= 1u << j;
    return mask;
}

bool operator==(const Allocation& a, const Allocation& b) {
    return a.num_agents == b.num_agents && a.owner == b.owner;
}

void OrdinalReport::validate(int m) const {
    if (static_cast<int>(order.size()) != m)
        throw ConfigError("ordinal report order must cover every item");
    std::vector<bool> seen(m, false);
    for (int j : order) {
        if (j < 0 || j >= m || seen[j]) throw ConfigError("ordinal report order is not a permutation");
        seen[j] = true;
    }
    if (positive_count < 0 || positive_count > m)
        throw ConfigError("positive_count out of range");
}

bool operator==(const OrdinalReport& a, const OrdinalReport& b) {
    return a.order == b.order && a.positive_count == b.positive_count;
}

OrdinalReport preference_order(const std::vector<Rational>& row) {
    OrdinalReport rep;
    rep.order.resize(row.size());
    std::iota(rep.order.begin(), rep.order.end(), 0);
    std::stable_sort(rep.order.begin(), rep.order.end(),
                     [&](int a, int b) { return row[a] > row[b]; });
    rep.positive_count = static_cast<int>(
        std::count_if(row.begin(), row.end(), [](const Rational& v) { return v > 0; }));
    return rep;
}

Rational utility(const std::vector<Rational>& row, const Bundle& b) {
    Rational u(0);
    for (int j : b.items) u += row[j];
    return u;
}

Rational utility_mask(const std::vector<Rational>& row, unsigned mask) {
    Rational u(0);
    for (int j = 0; j < static_cast<int>(row.size()); ++j)
        if (mask & (1u << j)) u += row[j];
    return u;
}

std::vector<Rational> utility_vector(const ValuationProfile& v, const Allocation& x) {
    std::vector<Rational> u(v.n(), Rational(0));
    for (int j = 0; j < v.m(); ++j) u[x.owner[j]] += v.values[x.owner[j]][j];
    return u;
}

}  // namespace fairdiv
