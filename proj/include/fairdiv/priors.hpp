#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fairdiv/mechanisms.hpp"
#include "fairdiv/rational.hpp"

namespace fairdiv {

// Samplers for valuation priors, a chi-square test of order neutrality (every
// strict preference order equally likely), and Monte Carlo incentive audits
// for mechanisms that are too rich for the exact enumeration path.
//
// Sampling uses doubles internally; every value is converted to an exact
// rational (dyadic) before any mechanism or audit sees it.  Sample index k
// always draws from a counter-derived stream, so results are independent of
// how a sample range is partitioned across workers.

struct PriorSpec {
    enum class Kind {
        iid_uniform,     // independent U(a, b) per item
        iid_exponential, // independent Exp(lambda) per item
        simplex,         // uniform on the (m-1)-simplex via sorted-gap method
        per_item,        // item j drawn from U(intervals[j])
        order_uniform,   // iid U(0,1); stands in for "uniformly random order"
    };

    Kind kind = Kind::iid_uniform;
    int m = 0;
    double a = 0.0, b = 1.0;  // iid_uniform
    double lambda = 1.0;      // iid_exponential
    std::vector<std::pair<double, double>> intervals;  // per_item

    static PriorSpec IidUniform(int m, double a, double b);
    static PriorSpec IidExponential(int m, double lambda);
    static PriorSpec Simplex(int m);
    static PriorSpec PerItem(std::vector<std::pair<double, double>> intervals);
    static PriorSpec OrderUniform(int m);

    void validate() const;
    std::string name() const;

    // CLI syntax: "simplex", "order_uniform", "uniform:a,b", "exp:lambda",
    // "per_item:a,b;c,d;..." (m inferred for per_item, required otherwise).
    static PriorSpec parse(const std::string& text, int m);
};

// A validated prior with any derived sampling parameters resolved once.  For
// a two-item per_item prior the sampler couples the items through a single
// uniform draw rotated by a calibrated shift, which makes both orders exactly
// equally likely whenever some shift achieves that; otherwise (and for three
// or more items) the items are drawn independently.
class PreparedSampler {
  public:
    explicit PreparedSampler(PriorSpec spec);

    const PriorSpec& spec() const { return spec_; }
    std::vector<Rational> sample(std::uint64_t seed, std::uint64_t index) const;

    // The rotation shift in use for the two-item per_item coupling, if any.
    std::optional<Rational> rotation_shift() const { return shift_; }

  private:
    PriorSpec spec_;
    std::optional<Rational> shift_;
};

std::vector<Rational> sample_valuation(const PriorSpec& prior,
                                       std::uint64_t seed,
                                       std::uint64_t index = 0);

struct NeutralityReport {
    bool pass = false;
    double chi_sq = 0.0;
    double critical = 0.0;     // rejection threshold at `alpha`
    double alpha = 0.0;
    std::uint64_t cells = 0;   // m! preference orders
    std::uint64_t samples = 0; // requested sample count
    std::uint64_t used = 0;    // samples with a strict order
    std::uint64_t ties = 0;    // samples discarded for tied values
    std::uint64_t seed = 0;
};

// Goodness-of-fit of the sampled preference-order distribution against the
// uniform distribution over all m! strict orders.  Requires m! * 20 <= N.
// Tied samples carry no order information and are tallied separately.
NeutralityReport neutrality_test(const PriorSpec& prior,
                                 std::uint64_t n_samples, double alpha,
                                 std::uint64_t seed);

struct McReport {
    double estimate = 0.0;   // mean utility gain of the deviation arm
    double std_error = 0.0;  // sample stdev / sqrt(count)
    std::uint64_t count = 0;
    std::uint64_t seed = 0;
};

// Monte Carlo incentive audit with common random numbers: for each deviation
// row d, estimates E[u_i(mech(d, V_-i))] - E[u_i(mech(truth, V_-i))] where
// the opponents' rows V_-i are shared between the two arms of each sample.
// Positive estimates mean the deviation profits.  Per-sample gains are
// accumulated as exact rationals, so the report is a deterministic function
// of (inputs, seed).
std::vector<McReport> bic_audit_mc(const Mechanism& mech, int agent,
                                   const std::vector<Rational>& true_values,
                                   const std::vector<std::vector<Rational>>& deviations,
                                   const PriorSpec& opponent_prior, int n,
                                   std::uint64_t n_samples, std::uint64_t seed);

// Upper critical value of the chi-square distribution with `df` degrees of
// freedom at tail probability `alpha`.  Uses a frozen table for the (df,
// alpha) pairs the neutrality test needs (m <= 6 at conventional levels) and
// the Wilson-Hilferty cube approximation elsewhere.
double chi_square_critical(std::uint64_t df, double alpha);

}  // namespace fairdiv
