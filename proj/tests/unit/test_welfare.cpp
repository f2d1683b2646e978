#include <doctest.h>

#include <vector>

#include "fairdiv/audits.hpp"
#include "fairdiv/welfare.hpp"

using namespace fairdiv;

namespace {

int cmp(const WelfareFn& f, const std::vector<Rational>& a,
        const std::vector<Rational>& b) {
    return compare_scores(welfare_score(f, a), welfare_score(f, b));
}

}  // namespace

TEST_CASE("welfare spec parsing") {
    CHECK(WelfareFn::parse("util").kind == WelfareKind::utilitarian);
    CHECK(WelfareFn::parse("utilitarian").kind == WelfareKind::utilitarian);
    CHECK(WelfareFn::parse("nash").kind == WelfareKind::nash);
    CHECK(WelfareFn::parse("egal").kind == WelfareKind::egalitarian);
    WelfareFn half = WelfareFn::parse("pmean:1/2");
    CHECK(half.kind == WelfareKind::p_mean);
    CHECK(half.p == Rational(1, 2));
    CHECK_THROWS_AS(WelfareFn::parse("pmean:1/3"), ConfigError);
    CHECK_THROWS_AS(WelfareFn::parse("mystery"), ConfigError);
}

TEST_CASE("utilitarian compares sums exactly") {
    WelfareFn f = WelfareFn::utilitarian();
    CHECK(cmp(f, {Rational(1), Rational(2)}, {Rational(3, 2), Rational(3, 2)}) == 0);
    CHECK(cmp(f, {Rational(2), Rational(2)}, {Rational(1), Rational(2)}) == 1);
    CHECK(cmp(f, {Rational(0), Rational(1)}, {Rational(1), Rational(1)}) == -1);
}

TEST_CASE("nash compares products and bottoms out at zero") {
    WelfareFn f = WelfareFn::nash();
    CHECK(cmp(f, {Rational(2), Rational(3)}, {Rational(5), Rational(1)}) == 1);
    CHECK(cmp(f, {Rational(2), Rational(3)}, {Rational(6), Rational(1)}) == 0);
    CHECK(cmp(f, {Rational(2), Rational(3)}, {Rational(3), Rational(2)}) == 0);
    // Any zero beats nothing: positive profiles always win.
    CHECK(cmp(f, {Rational(0), Rational(100)}, {Rational(1), Rational(1)}) == -1);
    CHECK(cmp(f, {Rational(1), Rational(1)}, {Rational(0), Rational(100)}) == 1);
}

TEST_CASE("egalitarian compares minima") {
    WelfareFn f = WelfareFn::egalitarian();
    CHECK(cmp(f, {Rational(1), Rational(9)}, {Rational(2), Rational(2)}) == -1);
    CHECK(cmp(f, {Rational(3), Rational(5)}, {Rational(3), Rational(7)}) == 0);
}

TEST_CASE("integer exponents compare power sums with sign flip") {
    WelfareFn sq = WelfareFn::p_mean(Rational(2));
    // Convexity: for p > 1 the spread profile wins at equal sums.
    CHECK(cmp(sq, {Rational(0), Rational(4)}, {Rational(2), Rational(2)}) == 1);

    WelfareFn inv = WelfareFn::p_mean(Rational(-1));
    // Harmonic mean: 2/(1/1+1/4)=8/5 vs 2/(1/2+1/2)=2.
    CHECK(cmp(inv, {Rational(1), Rational(4)}, {Rational(2), Rational(2)}) == -1);
    // Zero under a negative exponent is the bottom class.
    CHECK(cmp(inv, {Rational(0), Rational(9)}, {Rational(1, 100), Rational(1, 100)}) == -1);
}

TEST_CASE("half-integer exponents decide exactly via radical sums") {
    WelfareFn half = WelfareFn::p_mean(Rational(1, 2));
    // sqrt(2)+sqrt(8) = 3*sqrt(2) = sqrt(18): exact tie against (18, 0).
    CHECK(cmp(half, {Rational(2), Rational(8)}, {Rational(18), Rational(0)}) == 0);
    // (sqrt(2)+sqrt(3))^2 = 5+2*sqrt(6) < 10, so (10,0) wins.
    CHECK(cmp(half, {Rational(2), Rational(3)}, {Rational(10), Rational(0)}) == -1);
    CHECK(cmp(half, {Rational(1), Rational(4)}, {Rational(2), Rational(2)}) == 1);

    WelfareFn neg_half = WelfareFn::p_mean(Rational(-1, 2));
    CHECK(cmp(neg_half, {Rational(4), Rational(4)}, {Rational(1), Rational(16)}) == 1);
    CHECK(cmp(neg_half, {Rational(0), Rational(4)}, {Rational(1), Rational(1)}) == -1);
}

TEST_CASE("radical sums expose sign and differences") {
    RadicalSum a({{Rational(1), Rational(2)}, {Rational(1), Rational(8)}});
    RadicalSum b({{Rational(1), Rational(18)}});
    CHECK(a.minus(b).zero());
    CHECK(a.minus(b).sign() == 0);

    RadicalSum c({{Rational(1), Rational(2)}, {Rational(1), Rational(3)}});
    RadicalSum d({{Rational(1), Rational(10)}});
    CHECK(c.minus(d).sign() == -1);
    CHECK(d.minus(c).sign() == 1);
    CHECK(c.approx() == doctest::Approx(3.146264).epsilon(1e-5));
}

TEST_CASE("welfare values expose the numeric formula") {
    WelfareValue v = welfare_value(WelfareFn::utilitarian(),
                                   {Rational(1), Rational(3)});
    REQUIRE(v.exact.has_value());
    CHECK(*v.exact == Rational(2));
    CHECK(v.approx == doctest::Approx(2.0));

    WelfareValue nash = welfare_value(WelfareFn::nash(), {Rational(2), Rational(8)});
    CHECK(nash.approx == doctest::Approx(4.0));  // geometric mean

    WelfareValue half = welfare_value(WelfareFn::p_mean(Rational(1, 2)),
                                      {Rational(1), Rational(4)});
    CHECK(half.approx == doctest::Approx(2.25));
}

TEST_CASE("progressive transfers never hurt members with p at most one") {
    std::vector<Rational> x = {Rational(1), Rational(5)};
    std::vector<Rational> y = {Rational(2), Rational(4)};
    for (const WelfareFn& f :
         {WelfareFn::utilitarian(), WelfareFn::nash(), WelfareFn::egalitarian(),
          WelfareFn::p_mean(Rational(1, 2)), WelfareFn::p_mean(Rational(-1)),
          WelfareFn::p_mean(Rational(-1, 2))}) {
        CAPTURE(f.name());
        CHECK(f.pdp_member());
        AuditReport rep = pdp_holds(f, x, y);
        CHECK(rep.verdict);
    }
    CHECK_FALSE(WelfareFn::p_mean(Rational(2)).pdp_member());
}

TEST_CASE("transfer validation rejects non-transfers") {
    WelfareFn f = WelfareFn::utilitarian();
    // Sum not preserved.
    CHECK_THROWS_AS(pdp_holds(f, {Rational(1), Rational(5)},
                              {Rational(2), Rational(5)}),
                    ConfigError);
    // Recipient overtakes the donor's old level ordering.
    CHECK_THROWS_AS(pdp_holds(f, {Rational(1), Rational(5)},
                              {Rational(5), Rational(1)}),
                    ConfigError);
    // Three coordinates change.
    CHECK_THROWS_AS(pdp_holds(f, {Rational(1), Rational(2), Rational(3)},
                              {Rational(2), Rational(3), Rational(1)}),
                    ConfigError);
}
