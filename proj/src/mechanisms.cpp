#include "fairdiv/mechanisms.hpp"

#include <algorithm>

namespace fairdiv {

namespace {

std::vector<OrdinalReport> derive_reports(const ValuationProfile& v) {
    std::vector<OrdinalReport> reports;
    reports.reserve(v.n());
    for (int i = 0; i < v.n(); ++i) reports.push_back(preference_order(v.row(i)));
    return reports;
}

// Deals items nobody reported as positive round-robin by item index,
// starting at agent 1.
void deal_leftovers(Allocation& x, int n) {
    int next = 0;
    for (int j = 0; j < static_cast<int>(x.owner.size()); ++j)
        if (x.owner[j] < 0) x.owner[j] = next++ % n;
}

}  // namespace

Allocation rr_pass(const std::vector<OrdinalReport>& reports, int m) {
    int n = static_cast<int>(reports.size());
    for (const auto& r : reports) r.validate(m);
    Allocation x{n, std::vector<int>(m, -1)};
    int remaining = m;
    bool someone_picked = true;
    while (remaining > 0 && someone_picked) {
        someone_picked = false;
        for (int i = 0; i < n && remaining > 0; ++i) {
            // Highest-ranked remaining item within agent i's positive prefix.
            for (int k = 0; k < reports[i].positive_count; ++k) {
                int j = reports[i].order[k];
                if (x.owner[j] < 0) {
                    x.owner[j] = i;
                    --remaining;
                    someone_picked = true;
                    break;
                }
            }
        }
    }
    deal_leftovers(x, n);
    return x;
}

Allocation rr_pass(const ValuationProfile& v) { return rr_pass(derive_reports(v), v.m()); }

Allocation serial_dictatorship(const std::vector<OrdinalReport>& reports, int m,
                               const std::vector<int>& order) {
    int n = static_cast<int>(reports.size());
    for (const auto& r : reports) r.validate(m);
    if (static_cast<int>(order.size()) != n) throw ConfigError("dictator order must cover all agents");
    std::vector<bool> seen(n, false);
    for (int i : order) {
        if (i < 0 || i >= n || seen[i]) throw ConfigError("dictator order is not a permutation");
        seen[i] = true;
    }
    Allocation x{n, std::vector<int>(m, -1)};
    for (int i : order)
        for (int k = 0; k < reports[i].positive_count; ++k) {
            int j = reports[i].order[k];
            if (x.owner[j] < 0) x.owner[j] = i;
        }
    // Items positive for nobody go to the last agent in the order.
    for (int j = 0; j < m; ++j)
        if (x.owner[j] < 0) x.owner[j] = order.back();
    return x;
}

Allocation serial_dictatorship(const ValuationProfile& v, const std::vector<int>& order) {
    return serial_dictatorship(derive_reports(v), v.m(), order);
}

Allocation pass_least_favorite(const std::vector<OrdinalReport>& reports, int m) {
    if (reports.size() != 2) throw ConfigError("pass_least_favorite is defined for exactly two agents");
    for (const auto& r : reports) r.validate(m);
    int least = reports[0].order.back();
    Allocation x{2, std::vector<int>(m, 0)};
    x.owner[least] = 1;
    return x;
}

Allocation pass_least_favorite(const ValuationProfile& v) {
    return pass_least_favorite(derive_reports(v), v.m());
}

Allocation welfare_max(const ValuationProfile& v, const WelfareFn& f, std::uint64_t cap) {
    int n = v.n(), m = v.m();
    std::uint64_t total = 1;
    for (int j = 0; j < m; ++j) {
        if (total > cap / n) throw CapExceeded("welfare_max enumeration exceeds cap");
        total *= n;
    }
    if (total > cap) throw CapExceeded("welfare_max enumeration exceeds cap");

    // Odometer over owner vectors, last item fastest => lexicographic order;
    // utilities maintained incrementally.
    Allocation cur{n, std::vector<int>(m, 0)};
    std::vector<Rational> u(n, Rational(0));
    for (int j = 0; j < m; ++j) u[0] += v.values[0][j];

    Allocation best = cur;
    WelfareScore best_score = welfare_score(f, u);
    while (true) {
        int j = m - 1;
        while (j >= 0) {
            u[cur.owner[j]] -= v.values[cur.owner[j]][j];
            if (++cur.owner[j] == n) {
                cur.owner[j] = 0;
                u[0] += v.values[0][j];
                --j;
            } else {
                u[cur.owner[j]] += v.values[cur.owner[j]][j];
                break;
            }
        }
        if (j < 0) break;
        WelfareScore score = welfare_score(f, u);
        if (compare_scores(score, best_score) > 0) {  // ties keep the earlier = lexicographically smaller
            best_score = std::move(score);
            best = cur;
        }
    }
    return best;
}

std::string Mechanism::name() const {
    switch (kind) {
        case Kind::rr_pass: return "rr_pass";
        case Kind::serial_dictatorship: return "serial_dictatorship";
        case Kind::pass_least_favorite: return "pass_least_favorite";
        case Kind::welfare_max: return "welfare_max(" + welfare.name() + ")";
    }
    return "?";
}

Allocation Mechanism::run(const std::vector<OrdinalReport>& reports, int m) const {
    switch (kind) {
        case Kind::rr_pass: return rr_pass(reports, m);
        case Kind::serial_dictatorship: return serial_dictatorship(reports, m, sd_order);
        case Kind::pass_least_favorite: return pass_least_favorite(reports, m);
        case Kind::welfare_max: break;
    }
    throw ConfigError("mechanism is not ordinal: " + name());
}

Allocation Mechanism::run(const ValuationProfile& v) const {
    if (kind == Kind::welfare_max) return welfare_max(v, welfare);
    std::vector<OrdinalReport> reports;
    for (int i = 0; i < v.n(); ++i) reports.push_back(preference_order(v.row(i)));
    return run(reports, v.m());
}

}  // namespace fairdiv
