#include "fairdiv/characterization.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "fairdiv/errors.hpp"
#include "fairdiv/types.hpp"

namespace fairdiv {
namespace {

struct BudgetExhausted {};

// Two-agent mechanism-space model over ternary bids.  A profile is a pair of
// bid-vector indices, an allocation is an owner bitmask (bit j set = item j
// goes to agent 1).  Incentive constraints connect profiles that differ in
// exactly one agent's bid.
struct SearchSpace {
    int m = 0;
    int nb = 0;  // 3^m bid vectors
    int na = 0;  // 2^m allocations
    std::vector<std::vector<Rational>> bids;
    std::vector<Rational> util;           // [ag][bid][alloc]
    std::vector<std::uint32_t> allowed;   // [ag][bid][bid'][alloc] -> alloc' mask
    std::vector<std::uint32_t> base_dom;  // efficiency-filtered, per profile
    std::vector<std::uint32_t> dict_ok[2];
    std::vector<std::vector<std::pair<int, int>>> nbrs;  // (profile', agent)
    std::uint64_t node_budget = 0;
    std::uint64_t nodes = 0;

    int num_profiles() const { return nb * nb; }
    int profile_of(int b1, int b2) const { return b1 * nb + b2; }
    int bid_of(int profile, int ag) const {
        return ag == 0 ? profile / nb : profile % nb;
    }
    const Rational& u(int ag, int bid, int alloc) const {
        return util[(static_cast<std::size_t>(ag) * nb + bid) * na + alloc];
    }
    std::uint32_t allowed_mask(int ag, int bid, int bid_dev, int alloc) const {
        return allowed[((static_cast<std::size_t>(ag) * nb + bid) * nb + bid_dev) *
                           na +
                       alloc];
    }

    void spend(std::uint64_t amount = 1) {
        nodes += amount;
        if (nodes > node_budget) throw BudgetExhausted{};
    }
};

SearchSpace build_space(int m, const Rational& x, const Rational& y,
                        EfficiencyCriterion criterion,
                        std::uint64_t node_budget) {
    SearchSpace s;
    s.m = m;
    s.nb = 1;
    for (int j = 0; j < m; ++j) s.nb *= 3;
    s.na = 1 << m;
    s.node_budget = node_budget;

    const Rational levels[3] = {Rational(0), x, y};
    s.bids.resize(s.nb, std::vector<Rational>(m));
    for (int b = 0; b < s.nb; ++b) {
        int rest = b;
        for (int j = m - 1; j >= 0; --j) {
            s.bids[b][j] = levels[rest % 3];
            rest /= 3;
        }
    }

    s.util.assign(static_cast<std::size_t>(2) * s.nb * s.na, Rational(0));
    for (int ag = 0; ag < 2; ++ag) {
        for (int b = 0; b < s.nb; ++b) {
            for (int a = 0; a < s.na; ++a) {
                Rational total = 0;
                for (int j = 0; j < m; ++j) {
                    const int owner = (a >> j) & 1;
                    if (owner == ag) total += s.bids[b][j];
                }
                s.util[(static_cast<std::size_t>(ag) * s.nb + b) * s.na + a] =
                    std::move(total);
            }
        }
    }

    // allowed(ag, b, b', a) = { a' : truth-at-b prefers a to a' AND
    //                                truth-at-b' prefers a' to a }.
    s.allowed.assign(static_cast<std::size_t>(2) * s.nb * s.nb * s.na, 0);
    for (int ag = 0; ag < 2; ++ag) {
        for (int b = 0; b < s.nb; ++b) {
            for (int bd = 0; bd < s.nb; ++bd) {
                for (int a = 0; a < s.na; ++a) {
                    std::uint32_t mask = 0;
                    for (int ad = 0; ad < s.na; ++ad) {
                        if (s.u(ag, b, a) >= s.u(ag, b, ad) &&
                            s.u(ag, bd, ad) >= s.u(ag, bd, a)) {
                            mask |= 1u << ad;
                        }
                    }
                    s.allowed[((static_cast<std::size_t>(ag) * s.nb + b) * s.nb +
                               bd) *
                                  s.na +
                              a] = mask;
                }
            }
        }
    }

    s.base_dom.assign(s.num_profiles(), 0);
    for (int b1 = 0; b1 < s.nb; ++b1) {
        for (int b2 = 0; b2 < s.nb; ++b2) {
            ValuationProfile v;
            v.values = {s.bids[b1], s.bids[b2]};
            std::uint32_t dom = 0;
            for (int a = 0; a < s.na; ++a) {
                Allocation alloc;
                alloc.num_agents = 2;
                alloc.owner.resize(m);
                for (int j = 0; j < m; ++j) alloc.owner[j] = (a >> j) & 1;
                if (is_efficient(v, alloc, criterion).verdict) dom |= 1u << a;
            }
            s.base_dom[s.profile_of(b1, b2)] = dom;
        }
    }

    for (int sigma = 0; sigma < 2; ++sigma) {
        s.dict_ok[sigma].assign(s.num_profiles(), 0);
        for (int b1 = 0; b1 < s.nb; ++b1) {
            for (int b2 = 0; b2 < s.nb; ++b2) {
                std::uint32_t ok = 0;
                for (int a = 0; a < s.na; ++a) {
                    bool good = true;
                    for (int j = 0; j < m && good; ++j) {
                        const int owner = (a >> j) & 1;
                        const bool pos1 = s.bids[b1][j] > 0;
                        const bool pos2 = s.bids[b2][j] > 0;
                        if (sigma == 0) {
                            if (pos1 && owner != 0) good = false;
                            if (!pos1 && pos2 && owner != 1) good = false;
                        } else {
                            if (pos2 && owner != 1) good = false;
                            if (!pos2 && pos1 && owner != 0) good = false;
                        }
                    }
                    if (good) ok |= 1u << a;
                }
                s.dict_ok[sigma][s.profile_of(b1, b2)] = ok;
            }
        }
    }

    s.nbrs.resize(s.num_profiles());
    for (int b1 = 0; b1 < s.nb; ++b1) {
        for (int b2 = 0; b2 < s.nb; ++b2) {
            auto& out = s.nbrs[s.profile_of(b1, b2)];
            for (int bd = 0; bd < s.nb; ++bd) {
                if (bd != b1) out.emplace_back(s.profile_of(bd, b2), 0);
                if (bd != b2) out.emplace_back(s.profile_of(b1, bd), 1);
            }
        }
    }
    return s;
}

bool table_is_dictatorial(const SearchSpace& s, const std::vector<int>& table) {
    for (int sigma = 0; sigma < 2; ++sigma) {
        bool match = true;
        for (int p = 0; p < s.num_profiles() && match; ++p) {
            if (!((s.dict_ok[sigma][p] >> table[p]) & 1u)) match = false;
        }
        if (match) return true;
    }
    return false;
}

nlohmann::json table_to_json(const SearchSpace& s,
                             const std::vector<int>& table) {
    nlohmann::json rows = nlohmann::json::array();
    for (int p = 0; p < s.num_profiles(); ++p) {
        nlohmann::json bids = nlohmann::json::array();
        for (int ag = 0; ag < 2; ++ag) {
            nlohmann::json row = nlohmann::json::array();
            for (const auto& v : s.bids[s.bid_of(p, ag)]) {
                row.push_back(to_string(v));
            }
            bids.push_back(std::move(row));
        }
        nlohmann::json owners = nlohmann::json::array();
        for (int j = 0; j < s.m; ++j) {
            owners.push_back(((table[p] >> j) & 1) + 1);  // 1-indexed agents
        }
        rows.push_back({{"bids", std::move(bids)}, {"owners", std::move(owners)}});
    }
    return rows;
}

// Re-derives every constraint on the final table straight from utilities, as
// a guard against search bookkeeping errors.
void verify_table(const SearchSpace& s, const std::vector<int>& table) {
    for (int p = 0; p < s.num_profiles(); ++p) {
        if (!((s.base_dom[p] >> table[p]) & 1u)) {
            throw std::logic_error("search produced an inefficient allocation");
        }
        for (const auto& [q, ag] : s.nbrs[p]) {
            const int bp = s.bid_of(p, ag);
            if (s.u(ag, bp, table[p]) < s.u(ag, bp, table[q])) {
                throw std::logic_error("search produced a manipulable table");
            }
        }
    }
}

// ---- m = 1: exhaustive enumeration over all 2^9 tables -------------------

CharacterizationResult exhaustive_m1(const SearchSpace& s) {
    CharacterizationResult res;
    const int profiles = s.num_profiles();
    std::vector<int> table(profiles, 0);
    std::vector<int> first_bad;

    std::uint64_t total = 1;
    for (int p = 0; p < profiles; ++p) total *= static_cast<std::uint64_t>(s.na);

    for (std::uint64_t code = 0; code < total; ++code) {
        std::uint64_t rest = code;
        for (int p = 0; p < profiles; ++p) {
            table[p] = static_cast<int>(rest % s.na);
            rest /= s.na;
        }
        ++res.nodes;

        bool ok = true;
        for (int p = 0; p < profiles && ok; ++p) {
            if (!((s.base_dom[p] >> table[p]) & 1u)) ok = false;
        }
        for (int p = 0; p < profiles && ok; ++p) {
            for (const auto& [q, ag] : s.nbrs[p]) {
                const int bp = s.bid_of(p, ag);
                if (s.u(ag, bp, table[p]) < s.u(ag, bp, table[q])) {
                    ok = false;
                    break;
                }
            }
        }
        if (!ok) continue;

        ++res.survivor_count;
        if (first_bad.empty() && !table_is_dictatorial(s, table)) {
            first_bad = table;
        }
    }

    if (first_bad.empty()) {
        res.status = CharacterizationStatus::verified;
    } else {
        res.status = CharacterizationStatus::counterexample;
        res.counterexample = table_to_json(s, first_bad);
    }
    return res;
}

// ---- m = 2: constraint propagation over 81 profile variables -------------

using Domains = std::vector<std::uint32_t>;

// AC-3 style propagation.  Seeds are directed arcs (target, source, agent):
// values of `target` must keep a supporting value in `source`.
bool propagate(SearchSpace& s, Domains& dom,
               std::deque<std::tuple<int, int, int>> queue) {
    while (!queue.empty()) {
        auto [p, q, ag] = queue.front();
        queue.pop_front();
        s.spend();

        const int bp = s.bid_of(p, ag);
        const int bq = s.bid_of(q, ag);
        std::uint32_t kept = 0;
        for (std::uint32_t rest = dom[p]; rest; rest &= rest - 1) {
            const int a = std::countr_zero(rest);
            if (s.allowed_mask(ag, bp, bq, a) & dom[q]) kept |= 1u << a;
        }
        if (kept == dom[p]) continue;
        dom[p] = kept;
        if (kept == 0) return false;
        for (const auto& [r, ag2] : s.nbrs[p]) {
            if (r != q) queue.emplace_back(r, p, ag2);
        }
    }
    return true;
}

bool propagate_from(SearchSpace& s, Domains& dom, int var) {
    std::deque<std::tuple<int, int, int>> queue;
    for (const auto& [q, ag] : s.nbrs[var]) queue.emplace_back(q, var, ag);
    return propagate(s, dom, std::move(queue));
}

bool propagate_all(SearchSpace& s, Domains& dom) {
    std::deque<std::tuple<int, int, int>> queue;
    for (int p = 0; p < s.num_profiles(); ++p) {
        for (const auto& [q, ag] : s.nbrs[p]) queue.emplace_back(p, q, ag);
    }
    return propagate(s, dom, std::move(queue));
}

// Backtracking satisfiability over the propagated domains, most constrained
// profile first.  On success writes a fully assigned domain into `out`.
bool solve(SearchSpace& s, Domains dom, Domains& out) {
    int var = -1;
    int best = 0;
    for (int p = 0; p < s.num_profiles(); ++p) {
        const int size = std::popcount(dom[p]);
        if (size >= 2 && (var < 0 || size < best)) {
            var = p;
            best = size;
        }
    }
    if (var < 0) {
        out = std::move(dom);
        return true;
    }
    for (std::uint32_t rest = dom[var]; rest; rest &= rest - 1) {
        const int a = std::countr_zero(rest);
        s.spend();
        Domains child = dom;
        child[var] = 1u << a;
        if (propagate_from(s, child, var) && solve(s, std::move(child), out)) {
            return true;
        }
    }
    return false;
}

CharacterizationResult csp_m2(SearchSpace& s) {
    CharacterizationResult res;

    Domains dom0 = s.base_dom;
    if (!propagate_all(s, dom0)) {
        // No mechanism satisfies the constraints at all; serial dictatorships
        // always do, so this indicates a modelling bug.
        throw std::logic_error("constraint model rejected every mechanism");
    }

    const int profiles = s.num_profiles();
    for (int p1 = 0; p1 < profiles; ++p1) {
        for (std::uint32_t r1 = dom0[p1] & ~s.dict_ok[0][p1]; r1; r1 &= r1 - 1) {
            const int a1 = std::countr_zero(r1);
            Domains d1 = dom0;
            d1[p1] = 1u << a1;
            s.spend();
            if (!propagate_from(s, d1, p1)) continue;

            for (int p2 = 0; p2 < profiles; ++p2) {
                for (std::uint32_t r2 = d1[p2] & ~s.dict_ok[1][p2]; r2;
                     r2 &= r2 - 1) {
                    const int a2 = std::countr_zero(r2);
                    Domains d2 = d1;
                    d2[p2] = 1u << a2;
                    s.spend();
                    if (!propagate_from(s, d2, p2)) continue;

                    Domains solution;
                    if (solve(s, d2, solution)) {
                        std::vector<int> table(profiles);
                        for (int p = 0; p < profiles; ++p) {
                            table[p] = std::countr_zero(solution[p]);
                        }
                        verify_table(s, table);
                        if (table_is_dictatorial(s, table)) {
                            throw std::logic_error(
                                "pinned search returned a dictatorship");
                        }
                        res.status = CharacterizationStatus::counterexample;
                        res.counterexample = table_to_json(s, table);
                        res.nodes = s.nodes;
                        return res;
                    }
                }
            }
        }
    }
    res.status = CharacterizationStatus::verified;
    res.nodes = s.nodes;
    return res;
}

}  // namespace

std::string CharacterizationResult::status_name() const {
    switch (status) {
        case CharacterizationStatus::verified:
            return "verified";
        case CharacterizationStatus::counterexample:
            return "counterexample";
        case CharacterizationStatus::inconclusive:
            return "inconclusive";
    }
    return "inconclusive";
}

CharacterizationResult characterization_search(int m, const Rational& x,
                                               const Rational& y,
                                               EfficiencyCriterion criterion,
                                               std::uint64_t node_budget) {
    if (m != 1 && m != 2) {
        throw ConfigError("characterization search supports m = 1 or m = 2");
    }
    if (!(x > 0 && y > x)) {
        throw ConfigError("characterization search needs values y > x > 0");
    }
    if (criterion == EfficiencyCriterion::pareto) {
        throw ConfigError(
            "characterization search uses the sd or sd_plus criterion");
    }

    SearchSpace s = build_space(m, x, y, criterion, node_budget);
    try {
        if (m == 1) return exhaustive_m1(s);
        return csp_m2(s);
    } catch (const BudgetExhausted&) {
        CharacterizationResult res;
        res.status = CharacterizationStatus::inconclusive;
        res.nodes = s.nodes;
        return res;
    }
}

}  // namespace fairdiv
