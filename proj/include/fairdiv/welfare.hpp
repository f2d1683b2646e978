#pragma once

// The power-mean welfare family and exact comparison machinery.
//
// f_p(u) = ((1/n) * sum u_i^p)^(1/p), with the limits p -> 0 (geometric
// mean / Nash), p -> -inf (minimum / egalitarian) and p = 1 (average /
// utilitarian) as named members.  Comparisons are exact:
//   * integer p: compare sum u_i^p as rationals (order flipped for p < 0);
//   * half-integer p: compare sums of terms c * sqrt(r) via square-class
//     canonicalization plus escalating-precision integer-sqrt intervals;
//   * nash: compare products;
//   * any zero utility with p < 0 (or nash/egalitarian bottom cases) is
//     handled by an explicit bottom class, following the limit convention
//     that a zero entry sends f_p to 0 for p <= 0.
// Other exponent denominators are rejected: exact comparison of general
// p-th roots is not implemented, and an inexact fallback could misorder
// near-ties.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fairdiv/rational.hpp"

namespace fairdiv {

enum class WelfareKind { utilitarian, nash, egalitarian, p_mean };

struct WelfareFn {
    WelfareKind kind = WelfareKind::utilitarian;
    Rational p = 1;  // only meaningful for p_mean

    static WelfareFn utilitarian() { return {WelfareKind::utilitarian, 1}; }
    static WelfareFn nash() { return {WelfareKind::nash, 0}; }
    static WelfareFn egalitarian() { return {WelfareKind::egalitarian, 0}; }
    static WelfareFn p_mean(const Rational& p);

    // "util"/"utilitarian", "nash", "egal"/"egalitarian", "pmean:<rational>".
    static WelfareFn parse(const std::string& text);
    std::string name() const;

    // Members with p <= 1 satisfy the progressive-transfer principle;
    // callers may check, nothing is enforced.
    bool pdp_member() const;
};

// An exact value sum_k coef_k * sqrt(radicand_k), canonicalized so that the
// radicands lie in distinct square classes (r/r' never a rational square)
// and no coefficient is zero.  Distinct-class square roots are linearly
// independent over the rationals, so the canonical form is unique and the
// sign of a non-empty form is decided by interval refinement.
class RadicalSum {
  public:
    RadicalSum() = default;
    // Terms may repeat classes and carry zero coefficients; canonicalized.
    explicit RadicalSum(std::vector<std::pair<Rational, Rational>> terms);

    bool zero() const { return terms_.empty(); }
    int sign() const;  // -1, 0, +1
    RadicalSum minus(const RadicalSum& other) const;
    double approx() const;

  private:
    std::vector<std::pair<Rational, Rational>> terms_;  // (coef != 0, radicand > 0)
};

// Totally ordered welfare score; bigger is better.
struct WelfareScore {
    // 0 = bottom (zero entry under nash / negative p), 1 = regular.
    int cls = 1;
    bool radical = false;
    // Larger raw score is better when direction = +1, worse when -1
    // (negative exponents flip because z^(1/p) is decreasing).
    int direction = 1;
    Rational rat;
    RadicalSum rad;
};

// Comparison: -1, 0, +1 as a is worse/equal/better than b.
int compare_scores(const WelfareScore& a, const WelfareScore& b);

WelfareScore welfare_score(const WelfareFn& f, const std::vector<Rational>& utilities);

struct WelfareValue {
    double approx = 0;                // footnote formula, evaluated numerically
    std::optional<Rational> exact;    // set when the value itself is rational
    WelfareScore score;               // exact comparison key
};

WelfareValue welfare_value(const WelfareFn& f, const std::vector<Rational>& utilities);

}  // namespace fairdiv
