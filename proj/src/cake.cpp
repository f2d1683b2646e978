#include "fairdiv/cake.hpp"

#include <algorithm>

namespace fairdiv {

PieceSet PieceSet::from_intervals(std::vector<Interval> iv) {
    std::erase_if(iv, [](const Interval& i) { return !(i.lo < i.hi); });
    std::sort(iv.begin(), iv.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
    PieceSet out;
    for (auto& i : iv) {
        if (!out.iv_.empty() && i.lo <= out.iv_.back().hi) {
            if (i.hi > out.iv_.back().hi) out.iv_.back().hi = i.hi;
        } else {
            out.iv_.push_back(i);
        }
    }
    return out;
}

PieceSet PieceSet::full() { return from_intervals({{Rational(0), Rational(1)}}); }

Rational PieceSet::measure() const {
    Rational s(0);
    for (const auto& i : iv_) s += i.hi - i.lo;
    return s;
}

PieceSet PieceSet::unite(const PieceSet& other) const {
    std::vector<Interval> all = iv_;
    all.insert(all.end(), other.iv_.begin(), other.iv_.end());
    return from_intervals(std::move(all));
}

PieceSet PieceSet::subtract(const PieceSet& other) const {
    std::vector<Interval> out;
    for (const auto& a : iv_) {
        Rational lo = a.lo;
        for (const auto& b : other.iv_) {
            if (b.hi <= lo || b.lo >= a.hi) continue;
            if (b.lo > lo) out.push_back({lo, b.lo});
            if (b.hi > lo) lo = b.hi;
            if (!(lo < a.hi)) break;
        }
        if (lo < a.hi) out.push_back({lo, a.hi});
    }
    return from_intervals(std::move(out));
}

PieceSet PieceSet::intersect(const PieceSet& other) const {
    std::vector<Interval> out;
    for (const auto& a : iv_)
        for (const auto& b : other.iv_) {
            Rational lo = std::max(a.lo, b.lo), hi = std::min(a.hi, b.hi);
            if (lo < hi) out.push_back({lo, hi});
        }
    return from_intervals(std::move(out));
}

PiecewiseDensity PiecewiseDensity::uniform() {
    PiecewiseDensity f;
    f.segments.push_back({Rational(0), Rational(1), Rational(1), Rational(0)});
    return f;
}

Rational PiecewiseDensity::integral_total() const {
    Rational s(0);
    for (const auto& seg : segments)
        s += seg.a * (seg.r - seg.l) + seg.b * (seg.r * seg.r - seg.l * seg.l) / 2;
    return s;
}

void PiecewiseDensity::validate() const {
    if (segments.empty()) throw ParseError("density has no segments");
    if (segments.front().l != 0 || segments.back().r != 1)
        throw ParseError("density segments must cover [0,1)");
    for (std::size_t k = 0; k < segments.size(); ++k) {
        const auto& seg = segments[k];
        if (!(seg.l < seg.r)) throw ParseError("density segment must have positive width");
        if (k + 1 < segments.size() && segments[k + 1].l != seg.r)
            throw ParseError("density segments must be contiguous");
        // Linear on [l,r): non-negativity at both endpoints suffices.
        if (seg.a + seg.b * seg.l < 0 || seg.a + seg.b * seg.r < 0)
            throw ParseError("density is negative somewhere");
    }
    if (integral_total() != 1) throw ParseError("unnormalized density");
}

Rational integrate(const PiecewiseDensity& f, const Interval& iv) {
    Rational s(0);
    for (const auto& seg : f.segments) {
        Rational lo = std::max(seg.l, iv.lo), hi = std::min(seg.r, iv.hi);
        if (lo < hi) s += seg.a * (hi - lo) + seg.b * (hi * hi - lo * lo) / 2;
    }
    return s;
}

Rational integrate(const PiecewiseDensity& f, const PieceSet& X) {
    Rational s(0);
    for (const auto& iv : X.intervals()) s += integrate(f, iv);
    return s;
}

std::vector<PieceSet> split_equal(const PieceSet& X, const PiecewiseDensity& f, int k) {
    if (k < 2) throw ConfigError("split_equal needs at least two pieces");
    std::vector<std::vector<Interval>> parts(k);
    for (const auto& iv : X.intervals()) {
        for (const auto& seg : f.segments) {
            Rational lo = std::max(seg.l, iv.lo), hi = std::min(seg.r, iv.hi);
            if (!(lo < hi)) continue;
            if (seg.b == 0) {
                Rational step = (hi - lo) / k;
                for (int j = 0; j < k; ++j)
                    parts[j].push_back({lo + step * j, lo + step * (j + 1)});
            } else {
                // 2k slices; slice values form an arithmetic progression, so
                // pairing slice t with slice 2k-1-t equalises the piece values.
                Rational step = (hi - lo) / (2 * k);
                for (int t = 0; t < 2 * k; ++t) {
                    int piece = t < k ? t : 2 * k - 1 - t;
                    parts[piece].push_back({lo + step * t, lo + step * (t + 1)});
                }
            }
        }
    }
    std::vector<PieceSet> out;
    out.reserve(k);
    for (auto& p : parts) out.push_back(PieceSet::from_intervals(std::move(p)));
    return out;
}

namespace {

// Index of the crumb worth most to `chooser`, lowest index on ties.
int best_crumb(const std::vector<PieceSet>& crumbs, const PiecewiseDensity& chooser) {
    int best = 0;
    Rational best_val = integrate(chooser, crumbs[0]);
    for (int c = 1; c < static_cast<int>(crumbs.size()); ++c) {
        Rational val = integrate(chooser, crumbs[c]);
        if (val > best_val) {
            best = c;
            best_val = val;
        }
    }
    return best;
}

// One arrival step: agent `t` (1-indexed) takes her chosen crumb from each
// earlier agent; chooser decides which.
void run_arrival(std::vector<PieceSet>& X, const std::vector<const PiecewiseDensity*>& owner_density,
                 int t, const PiecewiseDensity& chooser) {
    for (int j = 0; j < t - 1; ++j) {
        auto crumbs = split_equal(X[j], *owner_density[j], t);
        int pick = best_crumb(crumbs, chooser);
        X[t - 1] = X[t - 1].unite(crumbs[pick]);
        X[j] = X[j].subtract(crumbs[pick]);
    }
}

}  // namespace

IaResult incremental_accommodation(const std::vector<PiecewiseDensity>& reports) {
    if (reports.empty()) throw ConfigError("no agents");
    for (const auto& f : reports) f.validate();
    int n = static_cast<int>(reports.size());
    std::vector<PieceSet> X(n);
    X[0] = PieceSet::full();
    std::vector<const PiecewiseDensity*> owners;
    for (const auto& f : reports) owners.push_back(&f);

    IaResult res;
    res.snapshots.push_back({X});
    for (int t = 2; t <= n; ++t) {
        run_arrival(X, owners, t, reports[t - 1]);
        res.snapshots.push_back({X});
    }
    res.allocation = {X};
    return res;
}

ProportionalityReport is_proportional(const CakeAllocation& alloc,
                                      const std::vector<PiecewiseDensity>& true_densities) {
    int n = static_cast<int>(true_densities.size());
    if (static_cast<int>(alloc.pieces.size()) != n)
        throw ConfigError("allocation and density counts differ");
    ProportionalityReport rep;
    rep.verdict = true;
    for (int i = 0; i < n; ++i) {
        Rational share = integrate(true_densities[i], alloc.pieces[i]);
        if (share < Rational(1, n)) {
            rep.verdict = false;
            rep.witness = {i, share};
            return rep;
        }
    }
    return rep;
}

ExpectedShareReport expected_share_check(const PieceSet& Xprime, const PiecewiseDensity& owner_density,
                                         const PiecewiseDensity& f_hat, int t) {
    auto crumbs = split_equal(Xprime, owner_density, t);
    Rational sum(0);
    for (const auto& c : crumbs) sum += integrate(f_hat, Xprime.subtract(c));
    ExpectedShareReport rep;
    rep.lhs = sum / t;
    rep.rhs = Rational(t - 1, t) * integrate(f_hat, Xprime);
    rep.equal = rep.lhs == rep.rhs;
    return rep;
}

namespace {

// Runs arrivals 1..i deterministically (earlier agents report
// earlier_reports, agent i reports g) and returns the full state.
std::vector<PieceSet> state_after_arrival_i(int agent_i, int n, const PiecewiseDensity& g,
                                            const std::vector<PiecewiseDensity>& earlier_reports,
                                            std::vector<const PiecewiseDensity*>& owner_density,
                                            const PiecewiseDensity& uniform) {
    std::vector<PieceSet> X(n);
    X[0] = PieceSet::full();
    owner_density.assign(n, &uniform);
    for (int j = 0; j < agent_i - 1; ++j) owner_density[j] = &earlier_reports[j];
    owner_density[agent_i - 1] = &g;
    for (int t = 2; t <= agent_i; ++t) run_arrival(X, owner_density, t, *owner_density[t - 1]);
    return X;
}

// Recursively enumerates every crumb choice of agents t..n (uniform picks)
// and accumulates the expected true value of agent i's final piece.
void enumerate_later(std::vector<PieceSet> X, const std::vector<const PiecewiseDensity*>& owners,
                     int t, int n, int agent_i, const PiecewiseDensity& f_true, const Rational& weight,
                     Rational& acc) {
    if (t > n) {
        acc += weight * integrate(f_true, X[agent_i - 1]);
        return;
    }
    // All pick tuples for agent t: one crumb index per earlier agent.
    std::vector<int> picks(t - 1, 0);
    Rational w = weight;
    for (int j = 0; j < t - 1; ++j) w /= t;
    while (true) {
        std::vector<PieceSet> Y = X;
        for (int j = 0; j < t - 1; ++j) {
            auto crumbs = split_equal(Y[j], *owners[j], t);
            Y[t - 1] = Y[t - 1].unite(crumbs[picks[j]]);
            Y[j] = Y[j].subtract(crumbs[picks[j]]);
        }
        enumerate_later(std::move(Y), owners, t + 1, n, agent_i, f_true, w, acc);
        int j = 0;
        while (j < t - 1 && ++picks[j] == t) picks[j++] = 0;
        if (j == t - 1) break;
    }
}

}  // namespace

Rational ia_expected_utility_enumerated(int agent_i, int n, const PiecewiseDensity& true_density,
                                        const PiecewiseDensity& report_of_i,
                                        const std::vector<PiecewiseDensity>& earlier_reports) {
    PiecewiseDensity uniform = PiecewiseDensity::uniform();
    std::vector<const PiecewiseDensity*> owners;
    auto X = state_after_arrival_i(agent_i, n, report_of_i, earlier_reports, owners, uniform);
    Rational acc(0);
    enumerate_later(std::move(X), owners, agent_i + 1, n, agent_i, true_density, Rational(1), acc);
    return acc;
}

CakeBicReport cake_bic_audit(int agent_i, int n, const PiecewiseDensity& true_density,
                             const std::vector<PiecewiseDensity>& deviations,
                             const std::vector<PiecewiseDensity>& earlier_reports) {
    if (agent_i < 1 || agent_i > n) throw ConfigError("agent index out of range");
    if (static_cast<int>(earlier_reports.size()) != agent_i - 1)
        throw ConfigError("need exactly one report per earlier agent");
    true_density.validate();
    for (const auto& f : deviations) f.validate();
    for (const auto& f : earlier_reports) f.validate();

    PiecewiseDensity uniform = PiecewiseDensity::uniform();
    bool cross_ok = true;
    auto eu_of = [&](const PiecewiseDensity& g) {
        std::vector<const PiecewiseDensity*> owners;
        auto X = state_after_arrival_i(agent_i, n, g, earlier_reports, owners, uniform);
        // The piece taken on arrival keeps an i/n fraction of its true value
        // in expectation over all later picks.
        Rational eu = Rational(agent_i, n) * integrate(true_density, X[agent_i - 1]);
        if (n <= 3) {
            Rational enumerated =
                ia_expected_utility_enumerated(agent_i, n, true_density, g, earlier_reports);
            if (enumerated != eu) cross_ok = false;
        }
        return eu;
    };

    CakeBicReport rep;
    rep.truthful_eu = eu_of(true_density);
    rep.truthful_optimal = true;
    for (const auto& d : deviations) {
        rep.deviation_eu.push_back(eu_of(d));
        if (rep.deviation_eu.back() > rep.truthful_eu) rep.truthful_optimal = false;
    }
    rep.cross_validated = n <= 3 && cross_ok;
    return rep;
}

}  // namespace fairdiv
