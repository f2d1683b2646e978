#include <doctest.h>

#include <sstream>

#include "fairdiv/io.hpp"
#include "fairdiv/rational.hpp"
#include "fairdiv/types.hpp"

using namespace fairdiv;

TEST_CASE("rational text forms parse exactly") {
    CHECK(rational_from_string("7/3") == Rational(7, 3));
    CHECK(rational_from_string("-2/4") == Rational(-1, 2));
    CHECK(rational_from_string("42") == Rational(42));
    CHECK(rational_from_string("0.6") == Rational(3, 5));
    CHECK(rational_from_string("1.25e-2") == Rational(1, 80));
    CHECK(rational_from_string("-0.125") == Rational(-1, 8));
    CHECK(rational_from_string("2e3") == Rational(2000));
    CHECK_THROWS_AS(rational_from_string("1/0"), ParseError);
    CHECK_THROWS_AS(rational_from_string("abc"), ParseError);
    CHECK_THROWS_AS(rational_from_string(""), ParseError);
}

TEST_CASE("rational to_string is p or p/q") {
    CHECK(to_string(Rational(3, 5)) == "3/5");
    CHECK(to_string(Rational(-7)) == "-7");
    CHECK(to_string(Rational(0)) == "0");
    CHECK(to_string(Rational(10, 5)) == "2");
}

TEST_CASE("double conversion is the exact dyadic value") {
    CHECK(rational_from_double(0.5) == Rational(1, 2));
    CHECK(rational_from_double(0.75) == Rational(3, 4));
    // 0.1 is not representable; its dyadic value differs from 1/10.
    CHECK(rational_from_double(0.1) != Rational(1, 10));
    for (double x : {0.1, 1e-9, 123456.789, 0.3333333333333333}) {
        CHECK(to_double(rational_from_double(x)) == x);
    }
    CHECK_THROWS_AS(rational_from_double(1.0 / 0.0), ParseError);
}

TEST_CASE("integer powers and square roots") {
    CHECK(pow_rational(Rational(2, 3), -2) == Rational(9, 4));
    CHECK(pow_rational(Rational(5), 0) == Rational(1));
    CHECK(pow_rational(Rational(0), 3) == Rational(0));
    CHECK_THROWS_AS(pow_rational(Rational(0), -1), ConfigError);

    CHECK(isqrt(Integer(0)) == 0);
    CHECK(isqrt(Integer(152399025)) == 12345);
    CHECK(isqrt(Integer(152399026)) == 12345);
    CHECK(isqrt(Integer(152399024)) == 12344);

    Rational root;
    CHECK(perfect_square(Rational(9, 4), &root));
    CHECK(root == Rational(3, 2));
    CHECK_FALSE(perfect_square(Rational(2), &root));
    CHECK(perfect_square(Rational(0), &root));
    CHECK(root == 0);
}

TEST_CASE("preference orders rank by value with index tie-break") {
    OrdinalReport r = preference_order({Rational(5), Rational(4), Rational(4), Rational(0)});
    CHECK(r.order == std::vector<int>{0, 1, 2, 3});
    CHECK(r.positive_count == 3);

    OrdinalReport s = preference_order({Rational(1, 3), Rational(1, 2)});
    CHECK(s.order == std::vector<int>{1, 0});
    CHECK(s.positive_count == 2);

    OrdinalReport z = preference_order({Rational(0), Rational(0)});
    CHECK(z.positive_count == 0);
}

TEST_CASE("ordinal report validation") {
    CHECK_THROWS_AS((OrdinalReport{{0, 0, 1}, 2}.validate(3)), ConfigError);
    CHECK_THROWS_AS((OrdinalReport{{0, 1}, 3}.validate(2)), ConfigError);
    CHECK_NOTHROW((OrdinalReport{{1, 0}, 0}.validate(2)));
}

TEST_CASE("bundles and utilities") {
    Bundle b = Bundle::from_mask(0b101u, 3);
    CHECK(b.items == std::vector<int>{0, 2});
    CHECK(b.contains(2));
    CHECK_FALSE(b.contains(1));
    CHECK(b.to_mask() == 0b101u);

    ValuationProfile v{{{Rational(5), Rational(4), Rational(3)},
                        {Rational(1), Rational(2), Rational(6)}}};
    Allocation x{2, {0, 1, 0}};
    CHECK(utility(v.row(0), x.bundle_of(0)) == Rational(8));
    CHECK(utility_vector(v, x) == std::vector<Rational>{Rational(8), Rational(2)});
    CHECK(utility_mask(v.row(1), x.mask_of(1)) == Rational(2));
}

TEST_CASE("goods instances round-trip with exact decimals") {
    const std::string text = R"({
      "agents": 2, "items": 2,
      "values": [[0.6, "2/5"], [1, 0]]
    })";
    Instance inst = parse_instance(text);
    REQUIRE(inst.goods.has_value());
    CHECK(inst.goods->values[0][0] == Rational(3, 5));
    CHECK(inst.goods->values[0][1] == Rational(2, 5));
    CHECK(inst.goods->values[1][0] == Rational(1));

    Instance again = parse_instance(serialize_instance(*inst.goods));
    CHECK(again.goods->values == inst.goods->values);
}

TEST_CASE("instance validation rejects malformed documents") {
    CHECK_THROWS_AS(parse_instance("{"), ParseError);
    CHECK_THROWS_AS(parse_instance(R"({"agents":2,"items":1,"values":[[1]]})"),
                    ParseError);
    CHECK_THROWS_AS(
        parse_instance(R"({"agents":1,"items":2,"values":[[1,-1]]})"),
        ParseError);
    CHECK_THROWS_AS(parse_instance(R"({"agents":1,"items":1})"), ParseError);
}

TEST_CASE("exact json number quoting") {
    nlohmann::json doc = parse_json_exact(R"({"a": 0.6, "b": 2, "c": [1.5e1]})");
    CHECK(doc["a"].is_string());
    CHECK(rational_from_json(doc["a"]) == Rational(3, 5));
    CHECK(doc["b"].is_number_integer());
    CHECK(rational_from_json(doc["c"][0]) == Rational(15));
}

TEST_CASE("allocation literals are 1-indexed and complete") {
    Allocation x = allocation_from_string("1,1,2,2", 2, 4);
    CHECK(x.owner == std::vector<int>{0, 0, 1, 1});
    CHECK(allocation_to_json(x) == nlohmann::json({1, 1, 2, 2}));
    CHECK_THROWS_AS(allocation_from_string("3,1", 2, 2), ParseError);
    CHECK_THROWS_AS(allocation_from_string("1,2", 2, 3), ParseError);
    CHECK_THROWS_AS(allocation_from_string("1,x", 2, 2), ParseError);
}

TEST_CASE("cake instances round-trip") {
    const std::string text = R"({
      "agents": 1,
      "densities": [[{"l": 0, "r": "1/2", "a": "3/2", "b": 0},
                     {"l": "1/2", "r": 1, "a": "1/2", "b": 0}]]
    })";
    Instance inst = parse_instance(text);
    REQUIRE(inst.cake.has_value());
    CHECK(inst.cake->size() == 1);
    Instance again = parse_instance(serialize_cake_instance(*inst.cake));
    CHECK(again.cake->at(0).segments.size() == 2);

    // A density that integrates to 1/2 is rejected.
    CHECK_THROWS_AS(parse_instance(R"({
      "agents": 1,
      "densities": [[{"l": 0, "r": "1/2", "a": 1, "b": 0},
                     {"l": "1/2", "r": 1, "a": 0, "b": 0}]]
    })"),
                    ParseError);
}
