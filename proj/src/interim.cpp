#include "fairdiv/interim.hpp"

#include <algorithm>
#include <numeric>

#include "fairdiv/errors.hpp"

namespace fairdiv {
namespace {

std::uint64_t checked_pow(std::uint64_t base, int exp, std::uint64_t cap) {
    std::uint64_t out = 1;
    for (int i = 0; i < exp; ++i) {
        if (base != 0 && out > cap / base) {
            throw CapExceeded("interim enumeration exceeds evaluation cap");
        }
        out *= base;
    }
    return out;
}

std::uint64_t factorial_u64(int m) {
    if (m > 20) {
        // 21! does not fit in 64 bits; no cap in range allows it anyway.
        throw CapExceeded("interim enumeration exceeds evaluation cap");
    }
    std::uint64_t f = 1;
    for (int i = 2; i <= m; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
}

std::vector<int> identity_order(int m) {
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    return order;
}

void require_ordinal(const Mechanism& mech) {
    if (!mech.ordinal()) {
        throw ConfigError("interim analysis requires an ordinal mechanism: " +
                          mech.name());
    }
}

// Invokes fn(reports) for every assignment of full preference orders to the
// opponents of `agent`.  `reports[agent]` must already be filled in.  Orders
// are iterated in place via next_permutation, so no permutation table is ever
// materialized.
template <typename Fn>
void for_each_opponent_profile(int agent, int n, int m,
                               std::vector<OrdinalReport>& reports, Fn&& fn) {
    std::vector<int> opponents;
    for (int i = 0; i < n; ++i) {
        if (i != agent) opponents.push_back(i);
    }
    for (int opp : opponents) {
        reports[opp] = OrdinalReport{identity_order(m), m};
    }
    while (true) {
        fn(reports);
        if (opponents.empty()) return;
        // Odometer over opponent orders, last opponent fastest.  A false
        // return from next_permutation means this digit wrapped back to the
        // identity order and the carry moves on.
        std::size_t pos = opponents.size();
        while (pos > 0) {
            --pos;
            auto& order = reports[opponents[pos]].order;
            if (std::next_permutation(order.begin(), order.end())) break;
            if (pos == 0) return;
        }
    }
}

}  // namespace

InterimTable interim_allocation(const Mechanism& mech, int agent,
                                const OrdinalReport& report, int n, int m,
                                std::uint64_t cap) {
    require_ordinal(mech);
    if (n < 1 || agent < 0 || agent >= n) {
        throw ConfigError("agent index out of range");
    }
    report.validate(m);
    const std::uint64_t total = checked_pow(factorial_u64(m), n - 1, cap);

    InterimTable table;
    table.agent = agent;
    table.report = report;
    std::vector<std::uint64_t> wins(m, 0);

    std::vector<OrdinalReport> reports(n);
    reports[agent] = report;
    for_each_opponent_profile(agent, n, m, reports,
                              [&](const std::vector<OrdinalReport>& profile) {
                                  Allocation a = mech.run(profile, m);
                                  for (int j = 0; j < m; ++j) {
                                      if (a.owner[j] == agent) ++wins[j];
                                  }
                                  ++table.evaluations;
                              });

    table.q.resize(m);
    for (int j = 0; j < m; ++j) {
        table.q[j] = Rational(Integer(wins[j]), Integer(total));
    }
    return table;
}

PositionalInterim positional_interim(const Mechanism& mech, int agent, int n,
                                     int m, std::uint64_t cap) {
    require_ordinal(mech);
    PositionalInterim out;
    out.agent = agent;
    out.q_pos.assign(m, Rational(0));

    const std::uint64_t fact = factorial_u64(m);
    const std::uint64_t per_table = checked_pow(fact, n - 1, cap);
    const std::uint64_t tables = fact * static_cast<std::uint64_t>(m + 1);
    if (per_table > cap / tables) {
        throw CapExceeded("positional scan exceeds evaluation cap");
    }

    // seen_at[ell]: the first table that established q_pos[ell].
    std::vector<std::optional<InterimTable>> seen_at(m);

    std::vector<int> order = identity_order(m);
    do {
        for (int k = 0; k <= m; ++k) {
            OrdinalReport rep{order, k};
            InterimTable t = interim_allocation(mech, agent, rep, n, m, cap);
            for (int ell = 0; ell < m; ++ell) {
                const int item = order[ell];
                if (ell < k) {
                    if (!seen_at[ell]) {
                        out.q_pos[ell] = t.q[item];
                        seen_at[ell] = t;
                    } else if (t.q[item] != out.q_pos[ell]) {
                        out.positional = false;
                        out.counterexample = std::make_pair(*seen_at[ell], t);
                        return out;
                    }
                } else if (t.q[item] != 0) {
                    // Mass on an item the agent reported as worthless.
                    out.positional = false;
                    out.counterexample = std::make_pair(t, t);
                    return out;
                }
            }
        }
    } while (std::next_permutation(order.begin(), order.end()));
    out.positional = true;
    return out;
}

bool check_monotone(const std::vector<Rational>& q_pos) {
    for (std::size_t ell = 1; ell < q_pos.size(); ++ell) {
        if (q_pos[ell] > q_pos[ell - 1]) return false;
    }
    return true;
}

BicAuditResult bic_audit_exact(const Mechanism& mech, int agent,
                               const std::vector<Rational>& true_values, int n,
                               std::uint64_t cap) {
    require_ordinal(mech);
    const int m = static_cast<int>(true_values.size());
    if (m == 0) throw ConfigError("empty valuation row");
    for (const auto& v : true_values) {
        if (v < 0) throw ConfigError("negative value in valuation row");
    }

    const std::uint64_t fact = factorial_u64(m);
    const std::uint64_t per_table = checked_pow(fact, n - 1, cap);
    const std::uint64_t tables = fact * static_cast<std::uint64_t>(m + 1);
    if (per_table > cap / tables) {
        throw CapExceeded("deviation scan exceeds evaluation cap");
    }

    auto expected_utility = [&](const OrdinalReport& rep) {
        InterimTable t = interim_allocation(mech, agent, rep, n, m, cap);
        Rational eu = 0;
        for (int j = 0; j < m; ++j) eu += t.q[j] * true_values[j];
        return eu;
    };

    BicAuditResult res;
    res.agent = agent;
    res.truthful_report = preference_order(true_values);
    res.truthful_eu = expected_utility(res.truthful_report);

    bool have_dev = false;
    std::vector<int> order = identity_order(m);
    do {
        for (int k = 0; k <= m; ++k) {
            OrdinalReport rep{order, k};
            if (rep.order == res.truthful_report.order &&
                rep.positive_count == res.truthful_report.positive_count) {
                continue;
            }
            Rational eu = expected_utility(rep);
            if (!have_dev || eu > res.best_deviation_eu) {
                have_dev = true;
                res.best_deviation = rep;
                res.best_deviation_eu = eu;
            }
        }
    } while (std::next_permutation(order.begin(), order.end()));
    if (!have_dev) {
        // m = 0 is rejected above, so the only report space of size one is
        // unreachable; keep a defensive fallback anyway.
        res.best_deviation = res.truthful_report;
        res.best_deviation_eu = res.truthful_eu;
    }
    res.verdict = res.truthful_eu >= res.best_deviation_eu;
    return res;
}

std::vector<DsicViolation> dsic_audit_grid(const Mechanism& mech,
                                           const std::vector<Rational>& grid,
                                           int n, int m, std::uint64_t cap,
                                           std::size_t max_violations) {
    if (grid.empty()) throw ConfigError("empty value grid");
    for (const auto& g : grid) {
        if (g < 0) throw ConfigError("negative value in grid");
    }
    const std::uint64_t g = grid.size();
    const std::uint64_t profiles = checked_pow(g, n * m, cap);
    const std::uint64_t devs = checked_pow(g, m, cap);
    // Each profile costs one truthful run plus n * g^m deviation runs.
    const std::uint64_t per_profile = 1 + static_cast<std::uint64_t>(n) * devs;
    if (profiles > cap / per_profile) {
        throw CapExceeded("grid audit exceeds evaluation cap");
    }

    std::vector<DsicViolation> violations;
    ValuationProfile prof;
    prof.values.assign(n, std::vector<Rational>(m, grid[0]));
    std::vector<std::size_t> idx(static_cast<std::size_t>(n) * m, 0);

    auto run_utilities = [&](const ValuationProfile& p,
                             const std::vector<std::vector<Rational>>& true_rows) {
        Allocation a = mech.run(p);
        std::vector<Rational> out;
        out.reserve(n);
        for (int i = 0; i < n; ++i) {
            Rational u = 0;
            for (int j = 0; j < m; ++j) {
                if (a.owner[j] == i) u += true_rows[i][j];
            }
            out.push_back(std::move(u));
        }
        return out;
    };

    while (true) {
        const auto truthful_u = run_utilities(prof, prof.values);
        for (int i = 0; i < n && violations.size() < max_violations; ++i) {
            std::vector<std::size_t> didx(m, 0);
            ValuationProfile dev_prof = prof;
            while (true) {
                bool same = true;
                for (int j = 0; j < m; ++j) {
                    dev_prof.values[i][j] = grid[didx[j]];
                    if (grid[didx[j]] != prof.values[i][j]) same = false;
                }
                if (!same) {
                    auto dev_u = run_utilities(dev_prof, prof.values);
                    if (dev_u[i] > truthful_u[i]) {
                        DsicViolation v;
                        v.profile = prof.values;
                        v.agent = i;
                        v.deviation = dev_prof.values[i];
                        v.truthful_utility = truthful_u[i];
                        v.deviation_utility = dev_u[i];
                        violations.push_back(std::move(v));
                        if (violations.size() >= max_violations) break;
                    }
                }
                int pos = m;
                bool done = true;
                while (pos > 0) {
                    --pos;
                    if (++didx[pos] < g) {
                        done = false;
                        break;
                    }
                    didx[pos] = 0;
                }
                if (done) break;
            }
        }
        if (violations.size() >= max_violations) break;

        std::size_t pos = idx.size();
        bool done = true;
        while (pos > 0) {
            --pos;
            if (++idx[pos] < g) {
                prof.values[pos / m][pos % m] = grid[idx[pos]];
                done = false;
                break;
            }
            idx[pos] = 0;
            prof.values[pos / m][pos % m] = grid[0];
        }
        if (done) break;
    }
    return violations;
}

bool check_elementary_monotonicity(const Mechanism& mech, int agent,
                                   const OrdinalReport& report, int n, int m,
                                   std::uint64_t cap) {
    require_ordinal(mech);
    report.validate(m);
    const std::uint64_t per_table = checked_pow(factorial_u64(m), n - 1, cap);
    if (per_table > cap / static_cast<std::uint64_t>(std::max(1, m))) {
        throw CapExceeded("monotonicity scan exceeds evaluation cap");
    }

    bool ok = true;
    std::vector<OrdinalReport> reports(n);
    reports[agent] = report;
    for_each_opponent_profile(
        agent, n, m, reports, [&](std::vector<OrdinalReport>& profile) {
            if (!ok) return;
            Allocation base = mech.run(profile, m);
            for (int ell = 0; ell + 1 < m; ++ell) {
                // Demote the rank-ell item by one position.
                OrdinalReport demoted = report;
                std::swap(demoted.order[ell], demoted.order[ell + 1]);
                const int item = report.order[ell];
                profile[agent] = demoted;
                Allocation after = mech.run(profile, m);
                profile[agent] = report;
                if (base.owner[item] != agent && after.owner[item] == agent) {
                    ok = false;
                    return;
                }
            }
        });
    return ok;
}

}  // namespace fairdiv
