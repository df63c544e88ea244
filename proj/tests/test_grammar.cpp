#include <doctest.h>

#include "pdiv/grammar.hpp"
#include "pdiv/json_out.hpp"

using namespace pdiv;

TEST_CASE("shape grammar") {
    CHECK(parse_shape("2:3")->str() == "2:3");
    CHECK(parse_shape(" 2:3 , 0:1 ")->str() == "0:1,2:3");
    CHECK(parse_shape("2:3^2")->summands()[0].mult == 2);
    CHECK(parse_shape("1:0,0:1")->str() == "0:1,1:0");
    CHECK_THROWS_AS(parse_shape("2:2"), ParseError);
    CHECK_THROWS_AS(parse_shape("2:"), ParseError);
    CHECK_THROWS_AS(parse_shape("x"), ParseError);
    CHECK_THROWS_AS(parse_shape("2:0"), ParseError); // slope-1 must be 1:0
    try {
        parse_shape("2:3,,");
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.pos >= 4);
    }
}

TEST_CASE("field element grammar") {
    auto f8 = FiniteField::make(2, 3);
    CHECK(parse_field_element("x^2+x+1", f8) ==
          f8->from_coeffs({1, 1, 1}));
    CHECK(parse_field_element("0", f8).is_zero());
    CHECK(parse_field_element("1", f8).is_one());
    auto f9 = FiniteField::make(3, 2);
    CHECK(parse_field_element("2x+1", f9) == f9->from_coeffs({1, 2}));
    CHECK(parse_field_element("2*x+1", f9) == f9->from_coeffs({1, 2}));
    CHECK(parse_field_element("4", f9) == f9->from_int(1));
    CHECK_THROWS_AS(parse_field_element("y", f9), ParseError);
    CHECK_THROWS_AS(parse_field_element("", f9), ParseError);
}

TEST_CASE("vector grammar") {
    auto shape = parse_shape("2:3");
    auto ring = WittRing::make(FiniteField::make(2, 4), 8);
    IsoVector v = parse_vector("e_0 + [x]e_1", shape, ring);
    FFElement x = ring->base()->gen();
    CHECK(v == IsoVector::basis(shape, ring, 0L) +
                   IsoVector::basis(shape, ring, 1L).teich_mul(x));
    CHECK(parse_vector("e_-1", shape, ring) == IsoVector::basis(shape, ring, -1L));
    CHECK(parse_vector("e_5", shape, ring) == IsoVector::basis(shape, ring, 0L).scale_p(1));
    // explicit (j,i,l) form on a multi-summand shape
    auto shape2 = parse_shape("1:2,1:1");
    auto ring2 = WittRing::make(FiniteField::make(2, 6), 8);
    IsoVector w = parse_vector("e(1,1,0) + [x]e(2,1,-2)", shape2, ring2);
    CHECK(w == IsoVector::basis(shape2, ring2, BasisIndex{0, 0, 0}) +
                   IsoVector::basis(shape2, ring2, BasisIndex{1, 0, -2})
                       .teich_mul(ring2->base()->gen()));
    CHECK_THROWS_AS(parse_vector("e_0", shape2, ring2), ParseError); // not simple
    CHECK_THROWS_AS(parse_vector("e(3,1,0)", shape2, ring2), ParseError);
    CHECK_THROWS_AS(parse_vector("[x e_0", shape, ring), ParseError);
    CHECK_THROWS_AS(parse_vector("", shape, ring), ParseError);
    // round trip through the printed form
    IsoVector u = parse_vector("e_0 + [x^2+1]e_3", shape, ring);
    CHECK(parse_vector(u.str(), shape, ring) == u);
}

TEST_CASE("profile JSON") {
    Json j = profile_to_json(paving_profile(3, 4));
    CHECK(j["schema"] == 1);
    CHECK(j["d"] == Json::array({1, 1, 2, 1}));
    CHECK(j["euler"] == 5);
    CHECK(j["count_check"] == 5);
    CHECK(j["dim"] == 3);
}
