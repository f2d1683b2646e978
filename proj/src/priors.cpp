#include "fairdiv/priors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "fairdiv/errors.hpp"
#include "fairdiv/types.hpp"

namespace fairdiv {
namespace {

// ---- deterministic counter-based stream -----------------------------------

// splitmix64: one 64-bit multiply-xorshift chain per draw.  Each (seed,
// index) pair opens an independent stream, so sample k never depends on how
// many samples some worker drew before it.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t s) : state(s) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }
};

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

SplitMix64 stream_for(std::uint64_t seed, std::uint64_t index) {
    return SplitMix64(mix64(seed + 0x9E3779B97F4A7C15ull) ^
                      mix64(index + 0xD1B54A32D192ED03ull));
}

Rational uniform_rational(SplitMix64& rng) {
    return rational_from_double(rng.uniform01());
}

// ---- exact rotation-shift calibration for two-item per_item priors --------

// Lebesgue measure of { u in [c, d) : alpha * u > beta }.
Rational halfline_measure(const Rational& c, const Rational& d,
                          const Rational& alpha, const Rational& beta) {
    if (c >= d) return Rational(0);
    if (alpha == 0) return beta < 0 ? d - c : Rational(0);
    const Rational t = beta / alpha;
    if (alpha > 0) {
        const Rational lo = std::max(c, t);
        return lo < d ? d - lo : Rational(0);
    }
    const Rational hi = std::min(d, t);
    return hi > c ? hi - c : Rational(0);
}

// P(v1 > v2) when v1 = a1 + w1*u and v2 = a2 + w2*frac(u + s), u ~ U[0, 1).
Rational rotation_order_prob(const Rational& a1, const Rational& w1,
                             const Rational& a2, const Rational& w2,
                             const Rational& s) {
    const Rational alpha = w1 - w2;
    const Rational beta_wrapless = (a2 - a1) + w2 * s;
    // u in [0, 1-s): v2 uses u + s;  u in [1-s, 1): v2 uses u + s - 1.
    return halfline_measure(Rational(0), Rational(1) - s, alpha, beta_wrapless) +
           halfline_measure(Rational(1) - s, Rational(1), alpha,
                            beta_wrapless - w2);
}

// Finds a shift s with P(v1 > v2) exactly 1/2, if one exists.  The order
// probability is continuous and piecewise linear in s, so a sign-changing
// bracket from a coarse scan can be refined until three probes are collinear
// and the linear piece is solved exactly.
std::optional<Rational> calibrate_shift(const Rational& a1, const Rational& w1,
                                        const Rational& a2, const Rational& w2) {
    const Rational half(1, 2);
    auto g = [&](const Rational& s) {
        return rotation_order_prob(a1, w1, a2, w2, s);
    };

    constexpr int kGrid = 64;
    Rational lo, hi, glo, ghi;
    bool have_bracket = false;
    Rational prev_s(0);
    Rational prev_g = g(prev_s);
    if (prev_g == half) return prev_s;
    for (int k = 1; k <= kGrid; ++k) {
        Rational s(k, kGrid);
        if (k == kGrid) s = Rational(0);  // the circle closes at s = 1 ~ 0
        Rational val = g(s);
        if (val == half) return s;
        if ((prev_g < half) != (val < half)) {
            lo = prev_s;
            hi = Rational(k, kGrid);
            glo = prev_g;
            ghi = val;
            have_bracket = true;
            break;
        }
        prev_s = s;
        prev_g = val;
    }
    if (!have_bracket) return std::nullopt;

    for (int iter = 0; iter < 200; ++iter) {
        const Rational mid = (lo + hi) / 2;
        const Rational gmid = g(mid);
        if (gmid == half) return mid;
        // If (lo, mid, hi) are collinear we are inside one linear piece and
        // can solve it exactly.
        if ((gmid - glo) * (hi - lo) == (ghi - glo) * (mid - lo) && ghi != glo) {
            const Rational root = lo + (half - glo) * (hi - lo) / (ghi - glo);
            if (root > lo && root < hi && g(root) == half) return root;
        }
        if ((glo < half) != (gmid < half)) {
            hi = mid;
            ghi = gmid;
        } else {
            lo = mid;
            glo = gmid;
        }
    }
    return std::nullopt;
}

// ---- inverse normal CDF (Acklam's rational approximation) -----------------

double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw ConfigError("significance level must be strictly inside (0,1)");
    }
    static const double A[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double B[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double C[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double D[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;
    double q, r;
    if (p < p_low) {
        q = std::sqrt(-2 * std::log(p));
        return (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q +
                C[5]) /
               ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1);
    }
    if (p <= 1 - p_low) {
        q = p - 0.5;
        r = q * q;
        return (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r +
                A[5]) *
               q /
               (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1);
    }
    q = std::sqrt(-2 * std::log(1 - p));
    return -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q +
             C[5]) /
           ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1);
}

std::uint64_t factorial_u64_local(int m) {
    std::uint64_t f = 1;
    for (int i = 2; i <= m; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
}

}  // namespace

// ---- PriorSpec -------------------------------------------------------------

PriorSpec PriorSpec::IidUniform(int m, double a, double b) {
    PriorSpec s;
    s.kind = Kind::iid_uniform;
    s.m = m;
    s.a = a;
    s.b = b;
    s.validate();
    return s;
}

PriorSpec PriorSpec::IidExponential(int m, double lambda) {
    PriorSpec s;
    s.kind = Kind::iid_exponential;
    s.m = m;
    s.lambda = lambda;
    s.validate();
    return s;
}

PriorSpec PriorSpec::Simplex(int m) {
    PriorSpec s;
    s.kind = Kind::simplex;
    s.m = m;
    s.validate();
    return s;
}

PriorSpec PriorSpec::PerItem(std::vector<std::pair<double, double>> intervals) {
    PriorSpec s;
    s.kind = Kind::per_item;
    s.m = static_cast<int>(intervals.size());
    s.intervals = std::move(intervals);
    s.validate();
    return s;
}

PriorSpec PriorSpec::OrderUniform(int m) {
    PriorSpec s;
    s.kind = Kind::order_uniform;
    s.m = m;
    s.validate();
    return s;
}

void PriorSpec::validate() const {
    if (m < 1) throw ConfigError("prior needs at least one item");
    switch (kind) {
        case Kind::iid_uniform:
            if (!(a < b)) throw ConfigError("uniform prior needs a < b");
            if (a < 0) throw ConfigError("uniform prior needs a >= 0");
            break;
        case Kind::iid_exponential:
            if (!(lambda > 0)) throw ConfigError("exponential prior needs lambda > 0");
            break;
        case Kind::simplex:
        case Kind::order_uniform:
            break;
        case Kind::per_item:
            if (static_cast<int>(intervals.size()) != m) {
                throw ConfigError("per_item prior needs one interval per item");
            }
            for (const auto& [lo, hi] : intervals) {
                if (!(lo < hi)) throw ConfigError("per_item interval needs a < b");
                if (lo < 0) throw ConfigError("per_item interval needs a >= 0");
            }
            break;
    }
}

std::string PriorSpec::name() const {
    std::ostringstream out;
    switch (kind) {
        case Kind::iid_uniform:
            out << "uniform:" << a << "," << b;
            break;
        case Kind::iid_exponential:
            out << "exp:" << lambda;
            break;
        case Kind::simplex:
            out << "simplex";
            break;
        case Kind::order_uniform:
            out << "order_uniform";
            break;
        case Kind::per_item: {
            out << "per_item:";
            bool first = true;
            for (const auto& [lo, hi] : intervals) {
                if (!first) out << ";";
                first = false;
                out << lo << "," << hi;
            }
            break;
        }
    }
    return out.str();
}

PriorSpec PriorSpec::parse(const std::string& text, int m) {
    auto split = [](const std::string& s, char sep) {
        std::vector<std::string> parts;
        std::string cur;
        for (char c : s) {
            if (c == sep) {
                parts.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        parts.push_back(cur);
        return parts;
    };
    auto to_double = [](const std::string& s) {
        try {
            std::size_t used = 0;
            double v = std::stod(s, &used);
            if (used != s.size()) throw ConfigError("bad number in prior: " + s);
            return v;
        } catch (const std::exception&) {
            throw ConfigError("bad number in prior: " + s);
        }
    };

    if (text == "simplex") return Simplex(m);
    if (text == "order_uniform") return OrderUniform(m);
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string rest =
        colon == std::string::npos ? "" : text.substr(colon + 1);
    if (head == "uniform") {
        const auto parts = split(rest, ',');
        if (parts.size() != 2) throw ConfigError("uniform prior wants uniform:a,b");
        return IidUniform(m, to_double(parts[0]), to_double(parts[1]));
    }
    if (head == "exp") {
        return IidExponential(m, to_double(rest));
    }
    if (head == "per_item") {
        std::vector<std::pair<double, double>> intervals;
        for (const auto& chunk : split(rest, ';')) {
            const auto ab = split(chunk, ',');
            if (ab.size() != 2) {
                throw ConfigError("per_item prior wants per_item:a,b;c,d;...");
            }
            intervals.emplace_back(to_double(ab[0]), to_double(ab[1]));
        }
        if (m != 0 && static_cast<int>(intervals.size()) != m) {
            throw ConfigError("per_item interval count must match item count");
        }
        return PerItem(std::move(intervals));
    }
    throw ConfigError("unknown prior: " + text);
}

// ---- PreparedSampler -------------------------------------------------------

PreparedSampler::PreparedSampler(PriorSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    if (spec_.kind == PriorSpec::Kind::per_item && spec_.m == 2) {
        const Rational a1 = rational_from_double(spec_.intervals[0].first);
        const Rational b1 = rational_from_double(spec_.intervals[0].second);
        const Rational a2 = rational_from_double(spec_.intervals[1].first);
        const Rational b2 = rational_from_double(spec_.intervals[1].second);
        shift_ = calibrate_shift(a1, b1 - a1, a2, b2 - a2);
    }
}

std::vector<Rational> PreparedSampler::sample(std::uint64_t seed,
                                              std::uint64_t index) const {
    SplitMix64 rng = stream_for(seed, index);
    const int m = spec_.m;
    std::vector<Rational> row(m);

    switch (spec_.kind) {
        case PriorSpec::Kind::iid_uniform: {
            const Rational a = rational_from_double(spec_.a);
            const Rational w = rational_from_double(spec_.b - spec_.a);
            for (int j = 0; j < m; ++j) row[j] = a + w * uniform_rational(rng);
            break;
        }
        case PriorSpec::Kind::iid_exponential: {
            for (int j = 0; j < m; ++j) {
                const double u = rng.uniform01();
                row[j] = rational_from_double(-std::log1p(-u) / spec_.lambda);
            }
            break;
        }
        case PriorSpec::Kind::order_uniform: {
            for (int j = 0; j < m; ++j) row[j] = uniform_rational(rng);
            break;
        }
        case PriorSpec::Kind::simplex: {
            if (m == 1) {
                row[0] = 1;
                break;
            }
            std::vector<Rational> cuts(m - 1);
            for (auto& c : cuts) c = uniform_rational(rng);
            std::sort(cuts.begin(), cuts.end());
            Rational prev(0);
            for (int j = 0; j + 1 < m; ++j) {
                row[j] = cuts[j] - prev;
                prev = cuts[j];
            }
            row[m - 1] = Rational(1) - prev;
            break;
        }
        case PriorSpec::Kind::per_item: {
            if (m == 2 && shift_) {
                const Rational u = uniform_rational(rng);
                Rational u2 = u + *shift_;
                if (u2 >= 1) u2 -= 1;
                const Rational a1 = rational_from_double(spec_.intervals[0].first);
                const Rational w1 = rational_from_double(
                    spec_.intervals[0].second - spec_.intervals[0].first);
                const Rational a2 = rational_from_double(spec_.intervals[1].first);
                const Rational w2 = rational_from_double(
                    spec_.intervals[1].second - spec_.intervals[1].first);
                row[0] = a1 + w1 * u;
                row[1] = a2 + w2 * u2;
                break;
            }
            for (int j = 0; j < m; ++j) {
                const Rational a = rational_from_double(spec_.intervals[j].first);
                const Rational w = rational_from_double(
                    spec_.intervals[j].second - spec_.intervals[j].first);
                row[j] = a + w * uniform_rational(rng);
            }
            break;
        }
    }
    return row;
}

std::vector<Rational> sample_valuation(const PriorSpec& prior,
                                       std::uint64_t seed,
                                       std::uint64_t index) {
    return PreparedSampler(prior).sample(seed, index);
}

// ---- neutrality test -------------------------------------------------------

double chi_square_critical(std::uint64_t df, double alpha) {
    // Frozen upper quantiles at the levels the neutrality test documents.
    static const std::map<std::pair<std::uint64_t, double>, double> kTable = {
        {{1, 0.05}, 3.841459},    {{1, 0.01}, 6.634897},
        {{1, 0.001}, 10.827566},  {{5, 0.05}, 11.070498},
        {{5, 0.01}, 15.086272},   {{5, 0.001}, 20.515006},
        {{23, 0.05}, 35.172462},  {{23, 0.01}, 41.638398},
        {{23, 0.001}, 49.728232}, {{119, 0.05}, 145.46074},
        {{119, 0.01}, 157.799541},{{119, 0.001}, 172.417682},
        {{719, 0.05}, 782.49061}, {{719, 0.01}, 810.147074},
        {{719, 0.001}, 841.90522},
    };
    if (df == 0) return 0.0;
    const auto it = kTable.find({df, alpha});
    if (it != kTable.end()) return it->second;
    // Wilson-Hilferty: chi2_df is approximately df * N(1 - 2/(9 df),
    // 2/(9 df))^3.
    const double z = inverse_normal_cdf(1.0 - alpha);
    const double d = static_cast<double>(df);
    const double term = 1.0 - 2.0 / (9.0 * d) + z * std::sqrt(2.0 / (9.0 * d));
    return d * term * term * term;
}

NeutralityReport neutrality_test(const PriorSpec& prior,
                                 std::uint64_t n_samples, double alpha,
                                 std::uint64_t seed) {
    prior.validate();
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ConfigError("significance level must be strictly inside (0,1)");
    }
    const int m = prior.m;
    if (m > 10) throw CapExceeded("too many preference-order cells");
    const std::uint64_t cells = factorial_u64_local(m);
    if (cells * 20 > n_samples) {
        throw ConfigError("need at least 20 samples per preference order");
    }

    PreparedSampler sampler(prior);
    std::vector<std::uint64_t> counts(cells, 0);
    std::uint64_t ties = 0;

    std::vector<int> ranked(m);
    for (std::uint64_t k = 0; k < n_samples; ++k) {
        const std::vector<Rational> row = sampler.sample(seed, k);
        std::iota(ranked.begin(), ranked.end(), 0);
        std::sort(ranked.begin(), ranked.end(),
                  [&](int x, int y) { return row[x] > row[y]; });
        bool tied = false;
        for (int j = 0; j + 1 < m; ++j) {
            if (row[ranked[j]] == row[ranked[j + 1]]) {
                tied = true;
                break;
            }
        }
        if (tied) {
            ++ties;
            continue;
        }
        // Lehmer code of the ranking permutation.
        std::uint64_t cell = 0;
        for (int j = 0; j < m; ++j) {
            int smaller = 0;
            for (int j2 = j + 1; j2 < m; ++j2) {
                if (ranked[j2] < ranked[j]) ++smaller;
            }
            cell = cell * static_cast<std::uint64_t>(m - j) +
                   static_cast<std::uint64_t>(smaller);
        }
        ++counts[cell];
    }

    NeutralityReport rep;
    rep.alpha = alpha;
    rep.cells = cells;
    rep.samples = n_samples;
    rep.ties = ties;
    rep.used = n_samples - ties;
    rep.seed = seed;
    rep.critical = chi_square_critical(cells - 1, alpha);
    if (rep.used == 0) {
        rep.pass = false;
        rep.chi_sq = 0.0;
        return rep;
    }
    const double expected =
        static_cast<double>(rep.used) / static_cast<double>(cells);
    double chi = 0.0;
    for (std::uint64_t c = 0; c < cells; ++c) {
        const double diff = static_cast<double>(counts[c]) - expected;
        chi += diff * diff / expected;
    }
    rep.chi_sq = chi;
    rep.pass = cells == 1 || chi <= rep.critical;
    return rep;
}

// ---- Monte Carlo incentive audit -------------------------------------------

std::vector<McReport> bic_audit_mc(const Mechanism& mech, int agent,
                                   const std::vector<Rational>& true_values,
                                   const std::vector<std::vector<Rational>>& deviations,
                                   const PriorSpec& opponent_prior, int n,
                                   std::uint64_t n_samples, std::uint64_t seed) {
    const int m = static_cast<int>(true_values.size());
    if (n < 2) throw ConfigError("audit needs at least two agents");
    if (agent < 0 || agent >= n) throw ConfigError("agent index out of range");
    if (m == 0) throw ConfigError("empty valuation row");
    if (opponent_prior.m != m) {
        throw ConfigError("opponent prior dimension must match item count");
    }
    for (const auto& d : deviations) {
        if (static_cast<int>(d.size()) != m) {
            throw ConfigError("deviation row length must match item count");
        }
    }
    if (n_samples == 0) throw ConfigError("sample count must be positive");

    PreparedSampler sampler(opponent_prior);
    const std::size_t num_devs = deviations.size();
    std::vector<Rational> sum(num_devs, Rational(0));
    std::vector<Rational> sum_sq(num_devs, Rational(0));

    ValuationProfile prof;
    prof.values.assign(n, std::vector<Rational>(m));

    auto agent_utility = [&](const Allocation& x,
                             const std::vector<Rational>& row) {
        Rational u = 0;
        for (int j = 0; j < m; ++j) {
            if (x.owner[j] == agent) u += row[j];
        }
        return u;
    };

    for (std::uint64_t k = 0; k < n_samples; ++k) {
        std::uint64_t slot = 0;
        for (int i = 0; i < n; ++i) {
            if (i == agent) continue;
            prof.values[i] =
                sampler.sample(seed, k * static_cast<std::uint64_t>(n - 1) + slot);
            ++slot;
        }
        prof.values[agent] = true_values;
        const Rational u_truth = agent_utility(mech.run(prof), true_values);
        for (std::size_t d = 0; d < num_devs; ++d) {
            prof.values[agent] = deviations[d];
            const Rational gain =
                agent_utility(mech.run(prof), true_values) - u_truth;
            sum[d] += gain;
            sum_sq[d] += gain * gain;
        }
    }

    std::vector<McReport> out(num_devs);
    for (std::size_t d = 0; d < num_devs; ++d) {
        McReport& rep = out[d];
        rep.count = n_samples;
        rep.seed = seed;
        const Rational mean = sum[d] / Rational(Integer(n_samples));
        rep.estimate = to_double(mean);
        if (n_samples >= 2) {
            const Rational var =
                (sum_sq[d] - sum[d] * mean) / Rational(Integer(n_samples - 1));
            rep.std_error = std::sqrt(
                std::max(0.0, to_double(var) / static_cast<double>(n_samples)));
        }
    }
    return out;
}

}  // namespace fairdiv
