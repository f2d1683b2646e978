#include "fairdiv/audits.hpp"

#include <algorithm>

#include "fairdiv/io.hpp"
#include "fairdiv/lp.hpp"

namespace fairdiv {

using nlohmann::json;

nlohmann::json AuditReport::to_json() const {
    json j;
    j["predicate"] = predicate;
    j["verdict"] = verdict;
    j["witness"] = witness.is_null() ? json() : witness;
    return j;
}

Dominance dominates(const std::vector<Rational>& row, const Bundle& a, const Bundle& b,
                    DominanceMode mode) {
    OrdinalReport rep = preference_order(row);
    int limit = mode == DominanceMode::SD_PLUS ? rep.positive_count
                                               : static_cast<int>(row.size());
    int ca = 0, cb = 0;
    bool any_strict = false;
    for (int k = 0; k < limit; ++k) {
        int j = rep.order[k];
        ca += a.contains(j) ? 1 : 0;
        cb += b.contains(j) ? 1 : 0;
        if (ca < cb) return Dominance::incomparable;
        if (ca > cb) any_strict = true;
    }
    return any_strict ? Dominance::strict : Dominance::weak;
}

namespace {

json bundle_to_json(const Bundle& b) {
    json arr = json::array();
    for (int j : b.items) arr.push_back(j + 1);
    return arr;
}

json utilities_to_json(const std::vector<Rational>& u) {
    json arr = json::array();
    for (const auto& x : u) arr.push_back(to_string(x));
    return arr;
}

}  // namespace

AuditReport is_ef1(const ValuationProfile& v, const Allocation& x) {
    AuditReport rep;
    rep.predicate = "ef1";
    rep.verdict = true;
    int n = v.n();
    for (int i = 0; i < n; ++i) {
        Rational ui = utility(v.row(i), x.bundle_of(i));
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            Bundle xj = x.bundle_of(j);
            if (xj.items.empty()) continue;
            Rational uj = utility(v.row(i), xj);
            Rational best_drop(0);
            for (int g : xj.items) best_drop = std::max(best_drop, v.values[i][g]);
            if (ui < uj - best_drop) {
                rep.verdict = false;
                rep.witness_pair = {i, j};
                rep.witness = {{"envious", i + 1},
                               {"envied", j + 1},
                               {"own_utility", to_string(ui)},
                               {"envied_utility", to_string(uj)}};
                return rep;
            }
        }
    }
    return rep;
}

AuditReport is_envy_free(const ValuationProfile& v, const Allocation& x) {
    AuditReport rep;
    rep.predicate = "envy_free";
    rep.verdict = true;
    int n = v.n();
    for (int i = 0; i < n; ++i) {
        Rational ui = utility(v.row(i), x.bundle_of(i));
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            Rational uj = utility(v.row(i), x.bundle_of(j));
            if (ui < uj) {
                rep.verdict = false;
                rep.witness_pair = {i, j};
                rep.witness = {{"envious", i + 1}, {"envied", j + 1}};
                return rep;
            }
        }
    }
    return rep;
}

namespace {

// Per-agent dominance classification of candidate bundle masks against the
// agent's bundle in x: bit 0 = weakly dominates, bit 1 = strictly.
struct MaskTables {
    std::vector<std::vector<unsigned char>> flags;  // [agent][mask]

    static unsigned char classify(const std::vector<int>& order, int limit, unsigned mask,
                                  unsigned xmask) {
        int ca = 0, cb = 0;
        bool strict = false;
        for (int k = 0; k < limit; ++k) {
            unsigned bit = 1u << order[k];
            ca += (mask & bit) ? 1 : 0;
            cb += (xmask & bit) ? 1 : 0;
            if (ca < cb) return 0;
            if (ca > cb) strict = true;
        }
        return strict ? 3 : 1;
    }
};

}  // namespace

AuditReport is_efficient(const ValuationProfile& v, const Allocation& x,
                         EfficiencyCriterion criterion, std::uint64_t cap) {
    int n = v.n(), m = v.m();
    std::uint64_t total = 1;
    for (int j = 0; j < m; ++j) {
        if (total > cap / n) throw CapExceeded("efficiency enumeration exceeds cap");
        total *= n;
    }

    AuditReport rep;
    rep.predicate = criterion == EfficiencyCriterion::pareto ? "pareto_efficient"
                    : criterion == EfficiencyCriterion::sd   ? "sd_efficient"
                                                             : "sd_plus_efficient";
    rep.verdict = true;
    if (n == 1) return rep;  // the single complete allocation dominates nothing

    std::vector<Rational> ux = utility_vector(v, x);

    // Prefix-dominance classification per agent; precomputed over all bundle
    // masks when the table fits, evaluated on the fly otherwise.
    std::vector<OrdinalReport> orders;
    std::vector<int> limits;
    std::vector<unsigned> xmasks;
    for (int i = 0; i < n; ++i) {
        orders.push_back(preference_order(v.row(i)));
        limits.push_back(criterion == EfficiencyCriterion::sd_plus ? orders.back().positive_count : m);
        xmasks.push_back(x.mask_of(i));
    }
    MaskTables tables;
    bool use_masks = m <= 18 && criterion != EfficiencyCriterion::pareto;
    if (use_masks) {
        tables.flags.assign(n, std::vector<unsigned char>(1u << m, 0));
        for (int i = 0; i < n; ++i)
            for (unsigned mask = 0; mask < (1u << m); ++mask)
                tables.flags[i][mask] = MaskTables::classify(orders[i].order, limits[i], mask, xmasks[i]);
    }

    // Owner-vector odometer (last item fastest = counting order), with
    // incremental masks and utilities.
    Allocation cur{n, std::vector<int>(m, 0)};
    std::vector<unsigned> mask(n, 0);
    mask[0] = (m == 32 ? ~0u : (1u << m) - 1);
    std::vector<Rational> u(n, Rational(0));
    for (int j = 0; j < m; ++j) u[0] += v.values[0][j];

    auto check = [&]() -> bool {
        if (cur == x) return false;
        if (criterion == EfficiencyCriterion::pareto) {
            bool strict = false;
            for (int i = 0; i < n; ++i) {
                if (u[i] < ux[i]) return false;
                if (u[i] > ux[i]) strict = true;
            }
            return strict;
        }
        bool strict = false;
        for (int i = 0; i < n; ++i) {
            unsigned char f = use_masks ? tables.flags[i][mask[i]]
                                        : MaskTables::classify(orders[i].order, limits[i], mask[i],
                                                               xmasks[i]);
            if (!(f & 1)) return false;
            if (f & 2) strict = true;
        }
        return strict;
    };

    while (true) {
        if (check()) {
            rep.verdict = false;
            rep.witness_allocation = cur;
            rep.witness = {{"dominating_allocation", allocation_to_json(cur)},
                           {"utilities", utilities_to_json(u)},
                           {"original_utilities", utilities_to_json(ux)}};
            return rep;
        }
        int j = m - 1;
        while (j >= 0) {
            int o = cur.owner[j];
            u[o] -= v.values[o][j];
            mask[o] &= ~(1u << j);
            if (++cur.owner[j] == n) {
                cur.owner[j] = 0;
                u[0] += v.values[0][j];
                mask[0] |= 1u << j;
                --j;
            } else {
                u[cur.owner[j]] += v.values[cur.owner[j]][j];
                mask[cur.owner[j]] |= 1u << j;
                break;
            }
        }
        if (j < 0) break;
    }
    return rep;
}

namespace {

// Shared LP construction: maximise total slack of fractional domination.
// Variables: z_{ij} (n*m, agent-major) then slack d_i (n).
// Rows: per item sum_i z_ij = 1; per agent sum_j v_ij z_ij - d_i = u_i(x).
void build_fpo_lp(const ValuationProfile& v, const Allocation& x,
                  std::vector<std::vector<Rational>>& A, std::vector<Rational>& b,
                  std::vector<Rational>& c) {
    int n = v.n(), m = v.m();
    std::vector<Rational> ux = utility_vector(v, x);
    int vars = n * m + n;
    A.assign(m + n, std::vector<Rational>(vars, Rational(0)));
    b.assign(m + n, Rational(0));
    c.assign(vars, Rational(0));
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < n; ++i) A[j][i * m + j] = 1;
        b[j] = 1;
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) A[m + i][i * m + j] = v.values[i][j];
        A[m + i][n * m + i] = -1;
        b[m + i] = ux[i];
        c[n * m + i] = 1;
    }
}

}  // namespace

AuditReport is_fpo(const ValuationProfile& v, const Allocation& x) {
    int n = v.n(), m = v.m();
    std::vector<std::vector<Rational>> A;
    std::vector<Rational> b, c;
    build_fpo_lp(v, x, A, b, c);
    LpResult lp = solve_lp_eq(A, b, c);
    if (lp.status != LpResult::Status::optimal)
        throw ConfigError("fpo LP did not solve (degenerate instance?)");

    AuditReport rep;
    rep.predicate = "fpo";
    rep.verdict = lp.objective == 0;
    if (!rep.verdict) {
        std::vector<std::vector<Rational>> z(n, std::vector<Rational>(m));
        std::vector<Rational> uz(n, Rational(0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < m; ++j) {
                z[i][j] = lp.x[i * m + j];
                uz[i] += v.values[i][j] * z[i][j];
            }
        rep.witness_fractional = z;
        json zj = json::array();
        for (const auto& row : z) {
            json r = json::array();
            for (const auto& cell : row) r.push_back(to_string(cell));
            zj.push_back(std::move(r));
        }
        rep.witness = {{"fractional_allocation", zj},
                       {"utilities", utilities_to_json(uz)},
                       {"original_utilities", utilities_to_json(utility_vector(v, x))},
                       {"total_slack", to_string(lp.objective)}};
    }
    return rep;
}

bool is_fpo_by_vertex_enumeration(const ValuationProfile& v, const Allocation& x) {
    if (v.n() * v.m() > 12) throw ConfigError("vertex enumeration route is limited to n*m <= 12");
    std::vector<std::vector<Rational>> A;
    std::vector<Rational> b, c;
    build_fpo_lp(v, x, A, b, c);
    Rational best(0);
    for_each_vertex(A, b, [&](const std::vector<Rational>& pt) {
        Rational obj(0);
        for (std::size_t j = 0; j < c.size(); ++j) obj += c[j] * pt[j];
        if (obj > best) best = obj;
    });
    return best == 0;
}

AuditReport is_fulfilling(const ValuationProfile& v, const Allocation& x) {
    AuditReport rep;
    rep.predicate = "fulfilling";
    rep.verdict = true;
    int n = v.n();
    for (int i = 0; i < n; ++i) {
        int positives = preference_order(v.row(i)).positive_count;
        if (positives < n) continue;
        if (utility(v.row(i), x.bundle_of(i)) == 0) {
            rep.verdict = false;
            rep.witness_agent = i;
            rep.witness = {{"agent", i + 1}, {"positive_items", positives}};
            return rep;
        }
    }
    return rep;
}

AuditReport pdp_holds(const WelfareFn& f, const std::vector<Rational>& x,
                      const std::vector<Rational>& y) {
    if (x.size() != y.size() || x.empty()) throw ConfigError("utility vectors must match in length");
    std::vector<int> diff;
    for (std::size_t k = 0; k < x.size(); ++k)
        if (x[k] != y[k]) diff.push_back(static_cast<int>(k));
    if (diff.size() != 2) throw ConfigError("inputs are not related by a progressive transfer");
    int i = diff[0], j = diff[1];
    // i plays the donor: richer before, still above the recipient's start.
    if (!(x[i] > x[j])) std::swap(i, j);
    bool related = x[i] + x[j] == y[i] + y[j] && x[i] > x[j] && x[i] > y[i] && y[i] > x[j];
    if (!related) throw ConfigError("inputs are not related by a progressive transfer");

    AuditReport rep;
    rep.predicate = "pdp";
    rep.verdict = compare_scores(welfare_score(f, x), welfare_score(f, y)) <= 0;
    rep.witness_pair = {i, j};
    rep.witness = {{"donor", i + 1}, {"recipient", j + 1}, {"welfare", f.name()}};
    return rep;
}

}  // namespace fairdiv
