#include <doctest.h>

#include <vector>

#include "fairdiv/cake.hpp"

using namespace fairdiv;

namespace {

Rational r(int p, int q = 1) { return Rational(p, q); }

PiecewiseDensity uniform() { return PiecewiseDensity::uniform(); }

// f(t) = 2t on [0,1): a linear density integrating to one.
PiecewiseDensity ramp() {
    PiecewiseDensity f;
    f.segments.push_back({r(0), r(1), r(0), r(2)});
    f.validate();
    return f;
}

// Constant 3/2 on [0,1/2), constant 1/2 on [1/2,1).
PiecewiseDensity step() {
    PiecewiseDensity f;
    f.segments.push_back({r(0), r(1, 2), r(3, 2), r(0)});
    f.segments.push_back({r(1, 2), r(1), r(1, 2), r(0)});
    f.validate();
    return f;
}

}  // namespace

TEST_CASE("piece sets stay canonical under algebra") {
    PieceSet a = PieceSet::from_intervals({{r(0), r(1, 2)}, {r(1, 2), r(3, 4)}});
    CHECK(a.intervals().size() == 1);  // adjacent intervals merge
    CHECK(a.measure() == r(3, 4));

    PieceSet b = PieceSet::from_intervals({{r(1, 4), r(7, 8)}});
    CHECK(a.unite(b).measure() == r(7, 8));
    CHECK(a.intersect(b).measure() == r(1, 2));
    CHECK(a.subtract(b).measure() == r(1, 4));
    CHECK(a.subtract(b).intervals()[0] == Interval{r(0), r(1, 4)});

    CHECK(PieceSet::full().measure() == r(1));
    CHECK(PieceSet::from_intervals({}).empty());
    CHECK(a.subtract(a).empty());
    CHECK(a.unite(b).subtract(b).unite(a.intersect(b)) == a);
}

TEST_CASE("integration is exact for constant and linear stretches") {
    CHECK(integrate(uniform(), Interval{r(1, 4), r(3, 4)}) == r(1, 2));
    // Integral of 2t over [1/4, 3/4) is t^2 = 9/16 - 1/16.
    CHECK(integrate(ramp(), Interval{r(1, 4), r(3, 4)}) == r(1, 2));
    CHECK(integrate(step(), Interval{r(1, 4), r(3, 4)}) == r(1, 2));
    CHECK(integrate(ramp(), PieceSet::full()) == r(1));

    PieceSet scattered = PieceSet::from_intervals({{r(0), r(1, 8)}, {r(3, 4), r(1)}});
    CHECK(integrate(uniform(), scattered) == r(3, 8));
}

TEST_CASE("equal splits produce equal length and equal value") {
    for (int variant = 0; variant < 3; ++variant) {
        PiecewiseDensity f = variant == 0 ? uniform() : variant == 1 ? ramp() : step();
        PieceSet X = variant == 2
                         ? PieceSet::from_intervals({{r(0), r(1, 4)}, {r(1, 2), r(1)}})
                         : PieceSet::full();
        for (int k : {2, 3, 5}) {
            CAPTURE(variant);
            CAPTURE(k);
            auto pieces = split_equal(X, f, k);
            REQUIRE(static_cast<int>(pieces.size()) == k);
            PieceSet covered;
            for (const auto& p : pieces) {
                CHECK(p.measure() == X.measure() / k);
                CHECK(integrate(f, p) == integrate(f, X) / k);
                covered = covered.unite(p);
            }
            CHECK(covered == X);
        }
    }
    CHECK_THROWS_AS(split_equal(PieceSet::full(), uniform(), 1), ConfigError);
}

TEST_CASE("arrival protocol divides the whole cake proportionally") {
    std::vector<PiecewiseDensity> reports = {uniform(), step(), ramp()};
    IaResult res = incremental_accommodation(reports);
    REQUIRE(res.allocation.pieces.size() == 3);
    REQUIRE(res.snapshots.size() == 3);

    PieceSet covered;
    for (const auto& p : res.allocation.pieces) covered = covered.unite(p);
    CHECK(covered == PieceSet::full());
    for (std::size_t i = 0; i < reports.size(); ++i) {
        for (std::size_t j = i + 1; j < reports.size(); ++j) {
            CHECK(res.allocation.pieces[i].intersect(res.allocation.pieces[j]).empty());
        }
    }

    CHECK(is_proportional(res.allocation, reports).verdict);

    // Two uniform agents split the cake into exact halves.
    IaResult halves = incremental_accommodation({uniform(), uniform()});
    CHECK(halves.allocation.pieces[0].measure() == r(1, 2));
    CHECK(halves.allocation.pieces[1].measure() == r(1, 2));
}

TEST_CASE("proportionality failures name the shorted agent") {
    CakeAllocation alloc;
    alloc.pieces.push_back(PieceSet::from_intervals({{r(0), r(1, 8)}}));
    alloc.pieces.push_back(PieceSet::from_intervals({{r(1, 8), r(1)}}));
    ProportionalityReport rep = is_proportional(alloc, {uniform(), uniform()});
    CHECK_FALSE(rep.verdict);
    REQUIRE(rep.witness.has_value());
    CHECK(rep.witness->first == 0);
    CHECK(rep.witness->second == r(1, 8));
}

TEST_CASE("removing one of t equal crumbs keeps the expected fraction of any measure") {
    PieceSet X = PieceSet::from_intervals({{r(1, 8), r(5, 8)}});
    for (int t : {2, 3, 5}) {
        ExpectedShareReport rep = expected_share_check(X, step(), ramp(), t);
        CAPTURE(t);
        CHECK(rep.equal);
        CHECK(rep.lhs == rep.rhs);
    }
}

TEST_CASE("arrival incentives favor the truth and match enumeration") {
    std::vector<PiecewiseDensity> earlier = {uniform()};
    CakeBicReport rep = cake_bic_audit(2, 3, step(), {ramp(), uniform()}, earlier);
    CHECK(rep.truthful_optimal);
    CHECK(rep.cross_validated);
    REQUIRE(rep.deviation_eu.size() == 2);
    for (const auto& eu : rep.deviation_eu) CHECK(eu <= rep.truthful_eu);

    // Reporting truthfully equals reporting a copy of the truth.
    CakeBicReport self = cake_bic_audit(2, 3, step(), {step()}, earlier);
    CHECK(self.truthful_optimal);
    CHECK(self.deviation_eu[0] == self.truthful_eu);
}

TEST_CASE("the expected utility enumeration matches the closed form directly") {
    std::vector<PiecewiseDensity> earlier = {uniform()};
    // Arriving second of three: the final piece keeps 2/3 of its arrival value.
    Rational enumerated = ia_expected_utility_enumerated(2, 3, step(), step(), earlier);
    IaResult arrival = incremental_accommodation({uniform(), step()});
    Rational arrival_value = integrate(step(), arrival.allocation.pieces[1]);
    CHECK(enumerated == Rational(2, 3) * arrival_value);
}

TEST_CASE("density validation rejects broken inputs") {
    PiecewiseDensity gap;
    gap.segments.push_back({r(0), r(1, 2), r(2), r(0)});
    CHECK_THROWS_AS(gap.validate(), ParseError);  // does not cover [0,1)

    PiecewiseDensity negative;
    negative.segments.push_back({r(0), r(1), r(-1), r(4)});
    CHECK_THROWS_AS(negative.validate(), ParseError);  // f(0) < 0

    PiecewiseDensity unnormalized;
    unnormalized.segments.push_back({r(0), r(1), r(2), r(0)});
    CHECK_THROWS_AS(unnormalized.validate(), ParseError);
}
