#include <doctest.h>

#include "fairdiv/characterization.hpp"

using namespace fairdiv;

TEST_CASE("single-item exhaustive scan finds only dictatorships under positive-prefix efficiency") {
    CharacterizationResult r =
        characterization_search(1, Rational(1), Rational(2), EfficiencyCriterion::sd_plus);
    CHECK(r.status == CharacterizationStatus::verified);
    CHECK(r.survivor_count == 4);
    CHECK(r.status_name() == "verified");
}

TEST_CASE("full-prefix efficiency admits a non-dictatorial single-item mechanism") {
    CharacterizationResult r =
        characterization_search(1, Rational(1), Rational(2), EfficiencyCriterion::sd);
    CHECK(r.status == CharacterizationStatus::counterexample);
    CHECK_FALSE(r.counterexample.is_null());
    CHECK(r.survivor_count > 4);
}

TEST_CASE("the survivor count is grid-scale invariant") {
    CharacterizationResult a =
        characterization_search(1, Rational(1), Rational(2), EfficiencyCriterion::sd_plus);
    CharacterizationResult b =
        characterization_search(1, Rational(1, 7), Rational(5, 7), EfficiencyCriterion::sd_plus);
    CHECK(a.survivor_count == b.survivor_count);
    CHECK(b.status == CharacterizationStatus::verified);
}

TEST_CASE("two-item search is exhausted or verified within its node budget") {
    CharacterizationResult tiny =
        characterization_search(2, Rational(1), Rational(2), EfficiencyCriterion::sd_plus, 10);
    // A ten-node budget cannot finish; the search must say so, not guess.
    CHECK(tiny.status == CharacterizationStatus::inconclusive);
    CHECK(tiny.nodes >= 10);

    CharacterizationResult full =
        characterization_search(2, Rational(1), Rational(2), EfficiencyCriterion::sd_plus);
    CHECK(full.status == CharacterizationStatus::verified);
}

TEST_CASE("search parameters are validated") {
    CHECK_THROWS_AS(characterization_search(3, Rational(1), Rational(2),
                                            EfficiencyCriterion::sd_plus),
                    ConfigError);
    CHECK_THROWS_AS(characterization_search(1, Rational(2), Rational(1),
                                            EfficiencyCriterion::sd_plus),
                    ConfigError);
    CHECK_THROWS_AS(characterization_search(1, Rational(0), Rational(1),
                                            EfficiencyCriterion::sd_plus),
                    ConfigError);
    CHECK_THROWS_AS(characterization_search(1, Rational(1), Rational(2),
                                            EfficiencyCriterion::pareto),
                    ConfigError);
}
