#pragma once

// Divisible-resource ("cake") engine over [0,1) with piecewise-linear
// densities and exact rational endpoints: interval algebra, equal splits,
// the arrival protocol, and its audits.

#include <optional>
#include <utility>
#include <vector>

#include "fairdiv/rational.hpp"

namespace fairdiv {

// Half-open interval [lo, hi).
struct Interval {
    Rational lo, hi;

    friend bool operator==(const Interval& a, const Interval& b) {
        return a.lo == b.lo && a.hi == b.hi;
    }
};

// A finite union of half-open intervals, kept canonical: sorted, disjoint,
// non-empty, adjacent intervals merged.
class PieceSet {
  public:
    PieceSet() = default;
    static PieceSet from_intervals(std::vector<Interval> iv);
    static PieceSet full();  // [0, 1)

    const std::vector<Interval>& intervals() const { return iv_; }
    bool empty() const { return iv_.empty(); }
    Rational measure() const;

    PieceSet unite(const PieceSet& other) const;
    PieceSet subtract(const PieceSet& other) const;
    PieceSet intersect(const PieceSet& other) const;

    friend bool operator==(const PieceSet& a, const PieceSet& b) { return a.iv_ == b.iv_; }

  private:
    std::vector<Interval> iv_;
};

// One linear piece of a density: f(t) = a + b*t on [l, r).
struct DensitySegment {
    Rational l, r, a, b;
};

// A piecewise-linear probability density on [0,1): segments partition [0,1),
// f is non-negative, and the total integral is exactly 1.
struct PiecewiseDensity {
    std::vector<DensitySegment> segments;

    static PiecewiseDensity uniform();
    // Structural checks; throws ParseError ("unnormalized density" when the
    // integral is not 1).
    void validate() const;
    Rational integral_total() const;
};

// Integral of f over an interval / piece set (exact).
Rational integrate(const PiecewiseDensity& f, const Interval& iv);
Rational integrate(const PiecewiseDensity& f, const PieceSet& X);

// Splits X into k pieces of equal length and equal f-value: constant
// stretches are cut into k equal slices dealt one to each piece; linear
// stretches are cut into 2k equal slices dealt symmetrically (slice j and
// slice 2k+1-j to the same piece), which equalises values because
// consecutive slice values of a linear density form an arithmetic
// progression.  Requires k >= 2.
std::vector<PieceSet> split_equal(const PieceSet& X, const PiecewiseDensity& f, int k);

struct CakeAllocation {
    std::vector<PieceSet> pieces;  // one per agent
};

struct IaResult {
    CakeAllocation allocation;
    // snapshots[t-1] is the allocation state right after agent t (1-indexed)
    // has arrived and taken her crumbs.
    std::vector<CakeAllocation> snapshots;
};

// Arrival protocol: agent 1 starts with all of [0,1); when agent i arrives,
// every earlier agent j splits her current piece into i equal crumbs using
// her own reported density, and agent i takes from each j the crumb worth
// most under agent i's reported density (ties: lowest crumb index).
IaResult incremental_accommodation(const std::vector<PiecewiseDensity>& reports);

struct ProportionalityReport {
    bool verdict = false;
    // Set when verdict is false: (agent, share) with share < 1/n.
    std::optional<std::pair<int, Rational>> witness;
};

ProportionalityReport is_proportional(const CakeAllocation& alloc,
                                      const std::vector<PiecewiseDensity>& true_densities);

struct ExpectedShareReport {
    Rational lhs, rhs;
    bool equal = false;
};

// With X' split into t equal crumbs by the owner's density, removing one
// uniformly-chosen crumb keeps, in expectation, exactly (t-1)/t of any other
// measure f_hat: lhs = (1/t) * sum_k f_hat(X' \ C_k), rhs = (t-1)/t * f_hat(X').
ExpectedShareReport expected_share_check(const PieceSet& Xprime, const PiecewiseDensity& owner_density,
                                         const PiecewiseDensity& f_hat, int t);

struct CakeBicReport {
    bool truthful_optimal = false;
    Rational truthful_eu;
    // Expected utilities per deviation report, in input order.
    std::vector<Rational> deviation_eu;
    bool cross_validated = false;  // set when the enumeration cross-check ran
};

// Expected final true value of arriving agent i's piece when she reports g:
// the piece she takes on arrival keeps, in expectation over the later
// (uniform) crumb picks, an i/n fraction of its true value.  Verifies that
// truthful reporting maximises this over the supplied deviations; for n <= 3
// the closed form is re-derived by enumerating every later pick sequence.
CakeBicReport cake_bic_audit(int agent_i, int n, const PiecewiseDensity& true_density,
                             const std::vector<PiecewiseDensity>& deviations,
                             const std::vector<PiecewiseDensity>& earlier_reports);

// Expected true value of agent i's final piece when she reports g and all
// later agents' crumb picks are enumerated uniformly (exact).  Agents after
// i are assigned uniform densities for their own later splits, which cannot
// affect the expectation.  Exposed for cross-validation tests.
Rational ia_expected_utility_enumerated(int agent_i, int n, const PiecewiseDensity& true_density,
                                        const PiecewiseDensity& report_of_i,
                                        const std::vector<PiecewiseDensity>& earlier_reports);

}  // namespace fairdiv
