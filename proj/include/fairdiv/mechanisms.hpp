#pragma once

// Allocation mechanisms for indivisible goods.  The ordinal mechanisms
// consume only (preference order, positive count) per agent; cardinal
// callers derive those reports from the valuation rows first.

#include <cstdint>
#include <vector>

#include "fairdiv/types.hpp"
#include "fairdiv/welfare.hpp"

namespace fairdiv {

// Round-robin picking over agents 1..n in index order, where an agent whose
// reported positive items are all gone passes instead of picking.  Items
// desired by nobody are dealt round-robin by item index starting at agent 1.
Allocation rr_pass(const std::vector<OrdinalReport>& reports, int m);
Allocation rr_pass(const ValuationProfile& v);

// Agents take turns in the given order (a permutation of 0..n-1); each takes
// every remaining item she reports as positively valued.  Items positive for
// nobody go to the last agent in the order.
Allocation serial_dictatorship(const std::vector<OrdinalReport>& reports, int m,
                               const std::vector<int>& order);
Allocation serial_dictatorship(const ValuationProfile& v, const std::vector<int>& order);

// Two agents only: agent 1 keeps everything except her lowest-ranked item,
// which goes to agent 2.
Allocation pass_least_favorite(const std::vector<OrdinalReport>& reports, int m);
Allocation pass_least_favorite(const ValuationProfile& v);

// Exhaustive welfare maximisation over all n^m complete allocations, exact
// comparisons, ties resolved to the lexicographically smallest owner vector.
// Throws CapExceeded when n^m > cap.
Allocation welfare_max(const ValuationProfile& v, const WelfareFn& f,
                       std::uint64_t cap = 10'000'000);

// A first-class mechanism handle used by the audit/interim machinery.
struct Mechanism {
    enum class Kind { rr_pass, serial_dictatorship, pass_least_favorite, welfare_max };

    Kind kind = Kind::rr_pass;
    std::vector<int> sd_order;  // serial_dictatorship only
    WelfareFn welfare;          // welfare_max only

    static Mechanism RrPass() { return {Kind::rr_pass, {}, {}}; }
    static Mechanism SerialDictatorship(std::vector<int> order) {
        return {Kind::serial_dictatorship, std::move(order), {}};
    }
    static Mechanism PassLeastFavorite() { return {Kind::pass_least_favorite, {}, {}}; }
    static Mechanism WelfareMax(const WelfareFn& f) { return {Kind::welfare_max, {}, f}; }

    // Ordinal mechanisms are exactly those whose outcome depends only on the
    // reports; welfare_max needs cardinal values.
    bool ordinal() const { return kind != Kind::welfare_max; }
    std::string name() const;

    Allocation run(const std::vector<OrdinalReport>& reports, int m) const;  // ordinal only
    Allocation run(const ValuationProfile& v) const;
};

}  // namespace fairdiv
