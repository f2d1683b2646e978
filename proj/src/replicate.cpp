#include "fairdiv/replicate.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "fairdiv/audits.hpp"
#include "fairdiv/cake.hpp"
#include "fairdiv/characterization.hpp"
#include "fairdiv/errors.hpp"
#include "fairdiv/interim.hpp"
#include "fairdiv/mechanisms.hpp"
#include "fairdiv/priors.hpp"
#include "fairdiv/welfare.hpp"

namespace fairdiv {
namespace {

// Deterministic stream for fixture-instance generation (same construction as
// the priors module uses per sample index).
struct DetStream {
    std::uint64_t state;

    explicit DetStream(std::uint64_t seed, std::uint64_t salt) {
        auto mix = [](std::uint64_t z) {
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
            return z ^ (z >> 31);
        };
        state = mix(seed + 0x9E3779B97F4A7C15ull) ^ mix(salt + 0xD1B54A32D192ED03ull);
    }

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    std::uint64_t below(std::uint64_t bound) { return next() % bound; }

    Rational rational01() { return rational_from_double(uniform01()); }
};

std::string rat(const Rational& r) { return to_string(r); }

nlohmann::json rationals_to_json(const std::vector<Rational>& xs) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& x : xs) out.push_back(rat(x));
    return out;
}

// ---- fixture: exact separations between the efficiency notions ------------

ReplicationResult fx_separations(const ReplicationOptions&) {
    ReplicationResult res;
    res.id = "appendixC-separations";
    bool pass = true;
    nlohmann::json checks = nlohmann::json::array();

    {
        ValuationProfile v;
        v.values = {{5, 4, 3, 2}, {6, 1, 2, 3}};
        Allocation x{2, {0, 0, 1, 1}};

        AuditReport plus = is_efficient(v, x, EfficiencyCriterion::sd_plus);
        AuditReport pareto = is_efficient(v, x, EfficiencyCriterion::pareto);
        const Allocation expected_witness{2, {1, 0, 0, 0}};
        bool ok = plus.verdict && !pareto.verdict &&
                  pareto.witness_allocation.has_value() &&
                  *pareto.witness_allocation == expected_witness;
        if (ok) {
            const auto u_dom = utility_vector(v, *pareto.witness_allocation);
            const auto u_orig = utility_vector(v, x);
            ok = u_dom == std::vector<Rational>{9, 6} &&
                 u_orig == std::vector<Rational>{9, 5};
        }
        pass = pass && ok;
        checks.push_back({{"instance", "four-item"},
                          {"sd_plus_efficient", plus.verdict},
                          {"pareto_efficient", pareto.verdict},
                          {"pareto_witness", pareto.witness},
                          {"ok", ok}});
    }
    {
        ValuationProfile v;
        v.values = {{1, 1}, {1, 0}};
        Allocation x{2, {0, 1}};

        AuditReport sd = is_efficient(v, x, EfficiencyCriterion::sd);
        AuditReport plus = is_efficient(v, x, EfficiencyCriterion::sd_plus);
        const Allocation expected_witness{2, {0, 0}};
        bool ok = sd.verdict && !plus.verdict &&
                  plus.witness_allocation.has_value() &&
                  *plus.witness_allocation == expected_witness;
        pass = pass && ok;
        checks.push_back({{"instance", "two-item"},
                          {"sd_efficient", sd.verdict},
                          {"sd_plus_efficient", plus.verdict},
                          {"sd_plus_witness", plus.witness},
                          {"ok", ok}});
    }

    res.pass = pass;
    res.details = {{"checks", checks}};
    return res;
}

// ---- fixture: positional interim structure + monotonicity ------------------

ReplicationResult fx_positional(const ReplicationOptions&) {
    ReplicationResult res;
    res.id = "lemma-positional";
    const Mechanism rr = Mechanism::RrPass();
    bool pass = true;
    nlohmann::json rows = nlohmann::json::array();

    for (int n : {2, 3}) {
        for (int m : {2, 3, 4}) {
            for (int agent = 0; agent < n; ++agent) {
                PositionalInterim p = positional_interim(rr, agent, n, m);
                const bool mono = p.positional && check_monotone(p.q_pos);
                pass = pass && p.positional && mono;
                rows.push_back({{"n", n},
                                {"m", m},
                                {"agent", agent + 1},
                                {"positional", p.positional},
                                {"monotone", mono},
                                {"q_pos", rationals_to_json(p.q_pos)}});
            }
        }
    }

    // Pinned values at n=2, m=3 for both agents.
    {
        PositionalInterim p1 = positional_interim(rr, 0, 2, 3);
        PositionalInterim p2 = positional_interim(rr, 1, 2, 3);
        const std::vector<Rational> exp1 = {1, Rational(1, 2), Rational(1, 2)};
        const std::vector<Rational> exp2 = {Rational(2, 3), Rational(1, 3), 0};
        const bool pinned = p1.q_pos == exp1 && p2.q_pos == exp2;
        pass = pass && pinned;
        rows.push_back({{"pinned_n2_m3", pinned}});
    }

    res.pass = pass;
    res.details = {{"tables", rows}};
    return res;
}

// ---- fixture: exact truthfulness-in-expectation audits ---------------------

ReplicationResult fx_rr_bic(const ReplicationOptions& opts) {
    ReplicationResult res;
    res.id = "lemma-rr-bic";
    const Mechanism rr = Mechanism::RrPass();
    bool pass = true;
    std::uint64_t audits = 0;
    nlohmann::json failures = nlohmann::json::array();

    const std::vector<std::pair<int, std::vector<int>>> shapes = {
        {2, {1, 2, 3, 4}},
        {3, {1, 2, 3}},
    };
    for (const auto& [n, ms] : shapes) {
        for (int m : ms) {
            PreparedSampler sampler(PriorSpec::IidUniform(m, 0.0, 1.0));
            for (int rep = 0; rep < 100; ++rep) {
                const std::uint64_t index =
                    (static_cast<std::uint64_t>(n) << 32) ^
                    (static_cast<std::uint64_t>(m) << 16) ^
                    static_cast<std::uint64_t>(rep);
                const std::vector<Rational> row = sampler.sample(opts.seed, index);
                for (int agent = 0; agent < n; ++agent) {
                    BicAuditResult audit = bic_audit_exact(rr, agent, row, n);
                    ++audits;
                    if (!audit.verdict) {
                        pass = false;
                        failures.push_back({{"n", n},
                                            {"m", m},
                                            {"agent", agent + 1},
                                            {"values", rationals_to_json(row)},
                                            {"truthful_eu", rat(audit.truthful_eu)},
                                            {"best_deviation_eu",
                                             rat(audit.best_deviation_eu)}});
                    }
                }
            }
        }
    }

    // One pinned exact value: the second of two agents with three items
    // values (5,4,3); the rank probabilities (2/3, 1/3, 0) give 14/3.
    BicAuditResult pinned = bic_audit_exact(rr, 1, {5, 4, 3}, 2);
    const bool pinned_ok = pinned.verdict && pinned.truthful_eu == Rational(14, 3);
    pass = pass && pinned_ok;

    res.pass = pass;
    res.details = {{"audits", audits},
                   {"failures", failures},
                   {"pinned_truthful_eu", rat(pinned.truthful_eu)},
                   {"pinned_ok", pinned_ok},
                   {"seed", opts.seed}};
    return res;
}

// ---- fixture: EF1 + SD+ efficiency property sweep --------------------------

ReplicationResult fx_rr_fairness(const ReplicationOptions& opts) {
    ReplicationResult res;
    res.id = "thm-rr-fairness";
    DetStream stream(opts.seed, 0x8f1a6d2b);
    bool pass = true;
    const int kInstances = 10'000;
    int checked = 0;
    nlohmann::json failures = nlohmann::json::array();

    for (int t = 0; t < kInstances; ++t) {
        const int n = 2 + static_cast<int>(stream.below(3));
        const int m = 1 + static_cast<int>(stream.below(8));
        ValuationProfile v;
        v.values.assign(n, std::vector<Rational>(m));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < m; ++j) {
                // Sparse zeros exercise the pass rule.
                v.values[i][j] = stream.below(8) == 0 ? Rational(0) : stream.rational01();
            }
        }
        const Allocation x = rr_pass(v);
        const AuditReport ef1 = is_ef1(v, x);
        const AuditReport eff = is_efficient(v, x, EfficiencyCriterion::sd_plus);
        ++checked;
        if (!ef1.verdict || !eff.verdict) {
            pass = false;
            if (failures.size() < 5) {
                nlohmann::json rows = nlohmann::json::array();
                for (const auto& r : v.values) rows.push_back(rationals_to_json(r));
                failures.push_back({{"values", rows},
                                    {"ef1", ef1.verdict},
                                    {"sd_plus_efficient", eff.verdict}});
            }
        }
    }

    res.pass = pass;
    res.details = {{"instances", checked}, {"failures", failures}, {"seed", opts.seed}};
    return res;
}

// ---- fixture: dictatorship characterization searches ------------------------

ReplicationResult fx_characterization(const ReplicationOptions& opts) {
    ReplicationResult res;
    res.id = "thm-characterization";

    CharacterizationResult plus1 =
        characterization_search(1, 1, 2, EfficiencyCriterion::sd_plus);
    CharacterizationResult sd1 =
        characterization_search(1, 1, 2, EfficiencyCriterion::sd);
    CharacterizationResult plus2 = characterization_search(
        2, 1, 2, EfficiencyCriterion::sd_plus, opts.node_budget);

    const bool ok1 = plus1.status == CharacterizationStatus::verified &&
                     plus1.survivor_count == 4;
    const bool ok2 = sd1.status == CharacterizationStatus::counterexample;
    const bool ok3 = plus2.status != CharacterizationStatus::counterexample;

    res.pass = ok1 && ok2 && ok3;
    res.details = {{"m1_sd_plus",
                    {{"status", plus1.status_name()},
                     {"survivors", plus1.survivor_count}}},
                   {"m1_sd",
                    {{"status", sd1.status_name()},
                     {"survivors", sd1.survivor_count},
                     {"counterexample", sd1.counterexample}}},
                   {"m2_sd_plus",
                    {{"status", plus2.status_name()}, {"nodes", plus2.nodes}}}};
    return res;
}

// ---- fixture: welfare-maximizer manipulation gain (Monte Carlo) ------------

ReplicationResult fx_welfare_bic(const ReplicationOptions& opts) {
    ReplicationResult res;
    res.id = "thm-welfare-bic";
    const std::vector<Rational> truth = {Rational(3, 5), Rational(2, 5)};
    const std::vector<std::vector<Rational>> devs = {
        {Rational(7, 10), Rational(3, 10)}};
    const PriorSpec prior = PriorSpec::Simplex(2);

    bool pass = true;
    nlohmann::json per_welfare = nlohmann::json::array();
    const std::vector<WelfareFn> fns = {
        WelfareFn::nash(), WelfareFn::utilitarian(), WelfareFn::egalitarian(),
        WelfareFn::p_mean(Rational(1, 2))};
    for (const WelfareFn& f : fns) {
        const Mechanism mech = Mechanism::WelfareMax(f);
        const McReport rep = bic_audit_mc(mech, 0, truth, devs, prior, 2,
                                          opts.samples, opts.seed)[0];
        const bool in_band = std::abs(rep.estimate - 0.02) <= 0.005;
        const bool significant = rep.estimate > 3.0 * rep.std_error;
        pass = pass && in_band && significant;
        per_welfare.push_back({{"welfare", f.name()},
                               {"gain", rep.estimate},
                               {"std_error", rep.std_error},
                               {"samples", rep.count},
                               {"in_band", in_band},
                               {"significant", significant}});
    }

    res.pass = pass;
    res.details = {{"closed_form_gain", 0.02},
                   {"reports", per_welfare},
                   {"seed", opts.seed}};
    return res;
}

// ---- fixture: unique fPO-and-fulfilling allocation --------------------------

ReplicationResult fx_fpo_fulfilling(const ReplicationOptions& opts) {
    ReplicationResult res;
    res.id = "thm-fpo-fulfilling";
    DetStream stream(opts.seed, 0x51c3a9e7);
    bool pass = true;
    nlohmann::json failures = nlohmann::json::array();
    int checks = 0;

    auto run_case = [&](const Rational& b, const Rational& y,
                        const std::vector<int>& expect_owner,
                        const std::vector<Rational>& expect_util) {
        ValuationProfile v;
        v.values = {{b, Rational(1) - b}, {y, Rational(1) - y}};
        int hits = 0;
        Allocation found{2, {0, 0}};
        for (int a = 0; a < 4; ++a) {
            Allocation x{2, {a & 1, (a >> 1) & 1}};
            if (is_fpo(v, x).verdict && is_fulfilling(v, x).verdict) {
                ++hits;
                found = x;
            }
        }
        ++checks;
        const bool ok = hits == 1 && found.owner == expect_owner &&
                        utility_vector(v, found) == expect_util;
        if (!ok) {
            pass = false;
            if (failures.size() < 5) {
                failures.push_back({{"b", rat(b)},
                                    {"y", rat(y)},
                                    {"hits", hits},
                                    {"owner", found.owner}});
            }
        }
    };

    for (int t = 0; t < 50; ++t) {
        Rational u = stream.rational01();
        Rational w = stream.rational01();
        while (u == w || u == 0 || w == 0) {
            u = stream.rational01();
            w = stream.rational01();
        }
        const Rational lo = std::min(u, w);
        const Rational hi = std::max(u, w);
        // Larger first-item weight for the first agent: she takes item 1.
        run_case(hi, lo, {0, 1}, {hi, Rational(1) - lo});
        // Larger for the second agent: the split flips.
        run_case(lo, hi, {1, 0}, {Rational(1) - lo, hi});
    }

    res.pass = pass;
    res.details = {{"checks", checks}, {"failures", failures}, {"seed", opts.seed}};
    return res;
}

// ---- random cake helpers ----------------------------------------------------

PiecewiseDensity random_density(DetStream& stream, bool linear) {
    const int nseg = 1 + static_cast<int>(stream.below(4));
    std::vector<Rational> cuts;
    cuts.push_back(0);
    for (int i = 1; i < nseg; ++i) cuts.push_back(stream.rational01());
    cuts.push_back(1);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    PiecewiseDensity f;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const Rational l = cuts[i];
        const Rational r = cuts[i + 1];
        // Endpoint heights in [1/10, 11/10] keep the density positive.
        const Rational y0 = stream.rational01() + Rational(1, 10);
        if (linear) {
            const Rational y1 = stream.rational01() + Rational(1, 10);
            const Rational slope = (y1 - y0) / (r - l);
            f.segments.push_back({l, r, y0 - slope * l, slope});
        } else {
            f.segments.push_back({l, r, y0, Rational(0)});
        }
    }
    const Rational total = f.integral_total();
    for (auto& seg : f.segments) {
        seg.a /= total;
        seg.b /= total;
    }
    f.validate();
    return f;
}

PieceSet random_pieceset(DetStream& stream) {
    std::vector<Rational> cuts;
    const int k = 4 + static_cast<int>(stream.below(3));  // 4..6 cut points
    for (int i = 0; i < k; ++i) cuts.push_back(stream.rational01());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<Interval> iv;
    for (std::size_t i = 0; i + 1 < cuts.size(); i += 2) {
        iv.push_back({cuts[i], cuts[i + 1]});
    }
    if (iv.empty()) iv.push_back({Rational(1, 4), Rational(3, 4)});
    return PieceSet::from_intervals(std::move(iv));
}

// ---- fixture: crumb-removal expected-share identity -------------------------

ReplicationResult fx_expected_share(const ReplicationOptions& opts) {
    ReplicationResult res;
    res.id = "lemma-expected-share";
    DetStream stream(opts.seed, 0x3bb9d1c5);
    bool pass = true;
    int checks = 0;
    nlohmann::json failures = nlohmann::json::array();

    for (int t = 0; t < 100; ++t) {
        const PieceSet x = random_pieceset(stream);
        const PiecewiseDensity owner = random_density(stream, t % 2 == 0);
        const PiecewiseDensity fhat = random_density(stream, t % 3 == 0);
        const int crumbs = 2 + static_cast<int>(stream.below(5));
        const ExpectedShareReport rep = expected_share_check(x, owner, fhat, crumbs);
        ++checks;
        if (!rep.equal) {
            pass = false;
            if (failures.size() < 5) {
                failures.push_back(
                    {{"lhs", rat(rep.lhs)}, {"rhs", rat(rep.rhs)}, {"t", crumbs}});
            }
        }
    }

    res.pass = pass;
    res.details = {{"checks", checks}, {"failures", failures}, {"seed", opts.seed}};
    return res;
}

// ---- fixture: cake bundle ----------------------------------------------------

ReplicationResult fx_cake_suite(const ReplicationOptions& opts) {
    ReplicationResult res;
    res.id = "cake-suite";
    DetStream stream(opts.seed, 0x77aa3311);
    bool pass = true;
    nlohmann::json failures = nlohmann::json::array();
    auto note_failure = [&](nlohmann::json j) {
        pass = false;
        if (failures.size() < 8) failures.push_back(std::move(j));
    };

    // Equal splits: equal measure and equal value, exactly.
    int split_checks = 0;
    for (int t = 0; t < 1000; ++t) {
        const bool linear = t % 2 == 1;
        const PiecewiseDensity f = random_density(stream, linear);
        const int k = 2 + static_cast<int>(stream.below(5));
        const PieceSet x = t % 2 == 0 ? PieceSet::full() : random_pieceset(stream);
        const std::vector<PieceSet> pieces = split_equal(x, f, k);
        const Rational measure_each = x.measure() / k;
        const Rational value_each = integrate(f, x) / k;
        PieceSet seen;
        bool ok = static_cast<int>(pieces.size()) == k;
        for (const PieceSet& piece : pieces) {
            if (!ok) break;
            ok = piece.measure() == measure_each &&
                 integrate(f, piece) == value_each;
            seen = seen.unite(piece);
        }
        ok = ok && seen == x;
        ++split_checks;
        if (!ok) note_failure({{"stage", "split_equal"}, {"k", k}, {"linear", linear}});
    }

    // Arrival protocol proportionality, exact.
    int ia_checks = 0;
    for (int t = 0; t < 1000; ++t) {
        const int n = 2 + static_cast<int>(stream.below(4));
        std::vector<PiecewiseDensity> reports;
        for (int i = 0; i < n; ++i) {
            reports.push_back(random_density(stream, stream.below(2) == 1));
        }
        const IaResult ia = incremental_accommodation(reports);
        const ProportionalityReport prop = is_proportional(ia.allocation, reports);
        ++ia_checks;
        if (!prop.verdict) {
            nlohmann::json j = {{"stage", "proportionality"}, {"n", n}};
            if (prop.witness) {
                j["agent"] = prop.witness->first + 1;
                j["share"] = rat(prop.witness->second);
            }
            note_failure(std::move(j));
        }
    }

    // Expected-share identity (also available standalone).
    const ReplicationResult share = fx_expected_share(opts);
    if (!share.pass) note_failure({{"stage", "expected_share"}});

    // Arrival-protocol report audit: closed form matches pick enumeration.
    int bic_checks = 0;
    for (int t = 0; t < 10; ++t) {
        const int n = 3;
        for (int agent_i : {2, 3}) {
            std::vector<PiecewiseDensity> earlier;
            for (int j = 1; j < agent_i; ++j) {
                earlier.push_back(random_density(stream, stream.below(2) == 1));
            }
            const PiecewiseDensity truth = random_density(stream, stream.below(2) == 1);
            std::vector<PiecewiseDensity> deviations;
            for (int d = 0; d < 2; ++d) {
                deviations.push_back(random_density(stream, stream.below(2) == 1));
            }
            const CakeBicReport rep =
                cake_bic_audit(agent_i, n, truth, deviations, earlier);
            ++bic_checks;
            if (!rep.truthful_optimal || !rep.cross_validated) {
                note_failure({{"stage", "cake_bic"},
                              {"agent", agent_i},
                              {"truthful_optimal", rep.truthful_optimal},
                              {"cross_validated", rep.cross_validated}});
            }
        }
    }

    res.pass = pass;
    res.details = {{"split_checks", split_checks},
                   {"ia_checks", ia_checks},
                   {"expected_share_pass", share.pass},
                   {"bic_checks", bic_checks},
                   {"failures", failures},
                   {"seed", opts.seed}};
    return res;
}

// ---- fixture: chi-square order-neutrality -----------------------------------

ReplicationResult fx_neutrality(const ReplicationOptions& opts) {
    ReplicationResult res;
    res.id = "neutrality";
    const double alpha = 0.01;
    const std::uint64_t n = opts.samples;

    const NeutralityReport simplex =
        neutrality_test(PriorSpec::Simplex(3), n, alpha, opts.seed);
    const NeutralityReport coupled = neutrality_test(
        PriorSpec::PerItem({{0.0, 1.0}, {0.5, 0.75}}), n, alpha, opts.seed);
    const NeutralityReport disjoint = neutrality_test(
        PriorSpec::PerItem({{0.0, 1.0}, {2.0, 3.0}}), n, alpha, opts.seed);

    auto to_json = [](const NeutralityReport& r) {
        return nlohmann::json{{"pass", r.pass},     {"chi_sq", r.chi_sq},
                              {"critical", r.critical}, {"cells", r.cells},
                              {"used", r.used},     {"ties", r.ties}};
    };

    res.pass = simplex.pass && coupled.pass && !disjoint.pass;
    res.details = {{"alpha", alpha},
                   {"samples", n},
                   {"seed", opts.seed},
                   {"simplex_m3", to_json(simplex)},
                   {"overlapping_intervals", to_json(coupled)},
                   {"disjoint_intervals", to_json(disjoint)}};
    return res;
}

using FixtureFn = ReplicationResult (*)(const ReplicationOptions&);

const std::vector<std::pair<std::string, FixtureFn>>& fixtures() {
    static const std::vector<std::pair<std::string, FixtureFn>> kFixtures = {
        {"appendixC-separations", fx_separations},
        {"lemma-positional", fx_positional},
        {"lemma-rr-bic", fx_rr_bic},
        {"thm-rr-fairness", fx_rr_fairness},
        {"thm-characterization", fx_characterization},
        {"thm-welfare-bic", fx_welfare_bic},
        {"thm-fpo-fulfilling", fx_fpo_fulfilling},
        {"lemma-expected-share", fx_expected_share},
        {"cake-suite", fx_cake_suite},
        {"neutrality", fx_neutrality},
    };
    return kFixtures;
}

}  // namespace

const std::vector<std::string>& replication_ids() {
    static const std::vector<std::string> kIds = [] {
        std::vector<std::string> ids;
        for (const auto& [id, fn] : fixtures()) ids.push_back(id);
        return ids;
    }();
    return kIds;
}

ReplicationResult run_replication(const std::string& id,
                                  const ReplicationOptions& opts) {
    for (const auto& [name, fn] : fixtures()) {
        if (name == id) return fn(opts);
    }
    throw ConfigError("unknown replication fixture: " + id);
}

}  // namespace fairdiv
