#include <doctest.h>

#include <cmath>
#include <vector>

#include "fairdiv/mechanisms.hpp"
#include "fairdiv/priors.hpp"

using namespace fairdiv;

TEST_CASE("prior specs parse and validate") {
    PriorSpec s = PriorSpec::parse("simplex", 3);
    CHECK(s.kind == PriorSpec::Kind::simplex);
    CHECK(s.m == 3);

    PriorSpec u = PriorSpec::parse("uniform:0,2", 2);
    CHECK(u.kind == PriorSpec::Kind::iid_uniform);
    CHECK(u.b == 2.0);

    PriorSpec e = PriorSpec::parse("exp:1.5", 2);
    CHECK(e.kind == PriorSpec::Kind::iid_exponential);

    PriorSpec p = PriorSpec::parse("per_item:0,1;0.5,0.75", 0);
    CHECK(p.kind == PriorSpec::Kind::per_item);
    CHECK(p.m == 2);
    CHECK(p.intervals[1].first == 0.5);

    CHECK(PriorSpec::parse("order_uniform", 4).kind == PriorSpec::Kind::order_uniform);

    CHECK_THROWS_AS(PriorSpec::parse("uniform:2,1", 2), ConfigError);
    CHECK_THROWS_AS(PriorSpec::parse("uniform:a,b", 2), ConfigError);
    CHECK_THROWS_AS(PriorSpec::parse("martian", 2), ConfigError);
    CHECK_THROWS_AS(PriorSpec::parse("exp:-1", 2), ConfigError);
}

TEST_CASE("sampling is deterministic in (seed, index) and independent of call order") {
    PreparedSampler sampler(PriorSpec::Simplex(3));
    auto a = sampler.sample(7, 5);
    auto b = sampler.sample(7, 5);
    CHECK(a == b);
    CHECK(sampler.sample(7, 6) != a);
    CHECK(sampler.sample(8, 5) != a);

    // A second sampler built later sees the same stream.
    PreparedSampler again(PriorSpec::Simplex(3));
    CHECK(again.sample(7, 5) == a);
}

TEST_CASE("simplex samples are exact unit partitions") {
    PreparedSampler sampler(PriorSpec::Simplex(4));
    for (std::uint64_t k = 0; k < 50; ++k) {
        auto row = sampler.sample(11, k);
        REQUIRE(row.size() == 4);
        Rational sum = 0;
        for (const auto& v : row) {
            CHECK(v >= 0);
            sum += v;
        }
        CHECK(sum == Rational(1));
    }
    CHECK(sample_valuation(PriorSpec::Simplex(1), 3, 0) == std::vector<Rational>{Rational(1)});
}

TEST_CASE("independent samplers respect their supports") {
    PreparedSampler uni(PriorSpec::IidUniform(3, 2.0, 3.0));
    PreparedSampler expo(PriorSpec::IidExponential(2, 1.5));
    for (std::uint64_t k = 0; k < 25; ++k) {
        for (const auto& v : uni.sample(1, k)) {
            CHECK(v >= 2);
            CHECK(v < 3);
        }
        for (const auto& v : expo.sample(1, k)) CHECK(v >= 0);
    }
}

TEST_CASE("simplex marginals center on one over m") {
    PreparedSampler sampler(PriorSpec::Simplex(3));
    const int N = 20000;
    double sum = 0;
    for (int k = 0; k < N; ++k) sum += to_double(sampler.sample(5, k)[0]);
    double mean = sum / N;
    // Var of a simplex coordinate is (m-1)/(m^2(m+1)) = 1/18; 4 sigma band.
    double sigma = std::sqrt(1.0 / 18.0 / N);
    CHECK(std::abs(mean - 1.0 / 3.0) < 4 * sigma);
}

TEST_CASE("paired-interval rotation makes both orders exactly equally likely") {
    PreparedSampler footnote(PriorSpec::PerItem({{0.0, 1.0}, {0.5, 0.75}}));
    REQUIRE(footnote.rotation_shift().has_value());
    CHECK(*footnote.rotation_shift() == Rational(1, 2));

    PreparedSampler twin(PriorSpec::PerItem({{0.0, 1.0}, {0.0, 1.0}}));
    REQUIRE(twin.rotation_shift().has_value());
    CHECK(*twin.rotation_shift() == Rational(1, 2));

    long above = 0, below = 0;
    for (std::uint64_t k = 0; k < 4000; ++k) {
        auto row = footnote.sample(0, k);
        if (row[0] > row[1]) ++above;
        if (row[0] < row[1]) ++below;
    }
    // Exact coupling: the counts may differ only by tie samples.
    CHECK(std::abs(above - below) < 300);

    // Disjoint supports cannot be balanced by any rotation.
    PreparedSampler disjoint(PriorSpec::PerItem({{0.0, 1.0}, {2.0, 3.0}}));
    CHECK_FALSE(disjoint.rotation_shift().has_value());
}

TEST_CASE("neutrality testing accepts neutral priors and rejects biased ones") {
    NeutralityReport simplex = neutrality_test(PriorSpec::Simplex(2), 4000, 0.01, 3);
    CHECK(simplex.pass);
    CHECK(simplex.cells == 2);
    CHECK(simplex.used + simplex.ties == simplex.samples);

    NeutralityReport coupled =
        neutrality_test(PriorSpec::PerItem({{0.0, 1.0}, {0.5, 0.75}}), 4000, 0.01, 3);
    CHECK(coupled.pass);

    NeutralityReport biased =
        neutrality_test(PriorSpec::PerItem({{0.0, 1.0}, {2.0, 3.0}}), 4000, 0.01, 3);
    CHECK_FALSE(biased.pass);
    CHECK(biased.chi_sq > biased.critical);

    CHECK_THROWS_AS(neutrality_test(PriorSpec::Simplex(3), 50, 0.01, 3), ConfigError);
}

TEST_CASE("chi-square critical values match the frozen table") {
    CHECK(chi_square_critical(1, 0.05) == doctest::Approx(3.841459).epsilon(1e-6));
    CHECK(chi_square_critical(5, 0.01) == doctest::Approx(15.086272).epsilon(1e-6));
    CHECK(chi_square_critical(23, 0.001) == doctest::Approx(49.728232).epsilon(1e-6));
    CHECK(chi_square_critical(119, 0.05) == doctest::Approx(145.46074).epsilon(1e-6));
    // Off-table pairs fall back to a cube approximation: sane and monotone.
    double a = chi_square_critical(7, 0.05);
    double b = chi_square_critical(8, 0.05);
    CHECK(a > 14.0);
    CHECK(a < 14.2);  // exact value 14.0671
    CHECK(b > a);
}

TEST_CASE("paired-sample incentive estimates are exact for identical arms") {
    const Mechanism rr = Mechanism::RrPass();
    std::vector<Rational> truth = {Rational(3, 5), Rational(2, 5)};
    auto reports = bic_audit_mc(rr, 0, truth, {truth}, PriorSpec::Simplex(2), 2, 500, 9);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].estimate == 0.0);
    CHECK(reports[0].std_error == 0.0);
    CHECK(reports[0].count == 500);
}

TEST_CASE("misranking against a truthful mechanism never profits in expectation") {
    const Mechanism rr = Mechanism::RrPass();
    // Three items so the opponent's draw influences what the first picker
    // ends up with; reversing the order loses value on some draws.
    std::vector<Rational> truth = {Rational(1, 2), Rational(1, 3), Rational(1, 6)};
    std::vector<Rational> reversed = {Rational(1, 6), Rational(1, 3), Rational(1, 2)};
    auto reports =
        bic_audit_mc(rr, 0, truth, {reversed}, PriorSpec::Simplex(3), 2, 20000, 9);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].estimate < 0.0);
    CHECK(reports[0].std_error > 0.0);
    // Identical seeds reproduce the estimate bit for bit.
    auto again =
        bic_audit_mc(rr, 0, truth, {reversed}, PriorSpec::Simplex(3), 2, 20000, 9);
    CHECK(again[0].estimate == reports[0].estimate);
    CHECK(again[0].std_error == reports[0].std_error);
}
