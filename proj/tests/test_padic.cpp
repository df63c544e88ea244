#include <doctest.h>

#include "oracles.hpp"
#include "pdiv/witt.hpp"

using namespace pdiv;

TEST_CASE("F_4 arithmetic against the exhaustive table") {
    auto f4 = FiniteField::make(2, 2);
    CHECK(f4->modulus() == std::vector<uint64_t>({1, 1, 1})); // x^2 + x + 1
    auto elems = f4->elements();
    REQUIRE(elems.size() == 4);
    // field axioms, exhaustively
    for (const auto& a : elems)
        for (const auto& b : elems) {
            CHECK(a * b == b * a);
            CHECK(a + b == b + a);
            for (const auto& c : elems) {
                CHECK((a * b) * c == a * (b * c));
                CHECK(a * (b + c) == a * b + a * c);
            }
            if (!b.is_zero()) CHECK(a * b * b.inverse() == a);
        }
    FFElement x = f4->gen();
    CHECK(x * (x + f4->one()) == f4->one());
    CHECK(f4->one().inverse() == f4->one());
}

TEST_CASE("Frobenius has order a and admits negative powers") {
    for (auto [p, a] : {std::pair<uint64_t, unsigned>{2, 2}, {3, 2}, {2, 3}, {2, 4}}) {
        auto f = FiniteField::make(p, a);
        for (const auto& x : f->elements()) {
            CHECK(x.frobenius((long)a) == x);
            CHECK(x.frobenius(1).frobenius(-1) == x);
            CHECK(x.frobenius(-1).frobenius(1) == x);
        }
    }
}

TEST_CASE("field errors") {
    auto f4 = FiniteField::make(2, 2);
    auto f2 = FiniteField::make(2, 1);
    CHECK_THROWS_AS(f4->zero().inverse(), DivisionByZero);
    CHECK_THROWS_AS(f4->one() + f2->one(), MixedParents);
    CHECK_THROWS_AS(FiniteField::make(4, 1), Error);
    // x^2 + 1 is reducible over F_2
    CHECK_THROWS_AS(FiniteField::make(2, std::vector<uint64_t>{1, 0, 1}), Error);
}

TEST_CASE("subfield linear independence") {
    auto f2 = FiniteField::make(2, 1);
    CHECK(f2->subfield_linearly_independent({f2->one()}, 1));
    CHECK_FALSE(f2->subfield_linearly_independent({f2->one(), f2->one()}, 1));

    auto f16 = FiniteField::make(2, 4);
    // 1 and any element outside F_4 form an F_4-basis of F_16
    FFElement g = f16->gen();
    bool g_in_f4 = g.frobenius(2) == g;
    REQUIRE_FALSE(g_in_f4);
    CHECK(f16->subfield_linearly_independent({f16->one(), g}, 2));
    CHECK(oracle::subfield_independent_exhaustive(f16, {f16->one(), g}, 2));
    // dependent pair: {g, g * c} for c in F_4
    FFElement c = f16->zero();
    for (const auto& z : f16->elements())
        if (!z.is_zero() && !z.is_one() && z.frobenius(2) == z) c = z;
    REQUIRE_FALSE(c.is_zero());
    CHECK_FALSE(f16->subfield_linearly_independent({g, g * c}, 2));
    CHECK_FALSE(oracle::subfield_independent_exhaustive(f16, {g, g * c}, 2));
    // implementation agrees with the exhaustive oracle on random pairs
    Rng rng(7);
    for (int t = 0; t < 40; ++t) {
        std::vector<FFElement> pair{f16->sample(rng), f16->sample(rng)};
        CHECK(f16->subfield_linearly_independent(pair, 2) ==
              oracle::subfield_independent_exhaustive(f16, pair, 2));
    }
    CHECK_THROWS_AS(f16->subfield_linearly_independent({g}, 3), UnsupportedResidueField);
}

TEST_CASE("Teichmuller lifts") {
    auto f9 = FiniteField::make(3, 2);
    auto ring = WittRing::make(f9, 3);
    CHECK(ring->teichmuller(f9->zero()) == ring->zero());
    CHECK(ring->teichmuller(f9->one()) == ring->one());
    // multiplicative on all pairs
    for (const auto& x : f9->elements())
        for (const auto& y : f9->elements())
            CHECK(ring->teichmuller(x) * ring->teichmuller(y) == ring->teichmuller(x * y));
    // q-1 root of unity or zero
    for (const auto& x : f9->elements()) {
        WittElement t = ring->teichmuller(x);
        WittElement t8 = ring->one();
        for (int i = 0; i < 8; ++i) t8 = t8 * t;
        if (!x.is_zero()) CHECK(t8 == ring->one());
        CHECK(t.residue() == x);
    }
}

TEST_CASE("1 + 1 = 2 in W(F_2)/2^4, digitwise") {
    auto f2 = FiniteField::make(2, 1);
    auto ring = WittRing::make(f2, 4);
    WittElement two = ring->teichmuller(f2->one()) + ring->teichmuller(f2->one());
    auto d = two.digits();
    REQUIRE(d.size() == 4);
    CHECK(d[0].is_zero());
    CHECK(d[1].is_one());
    CHECK(d[2].is_zero());
    CHECK(d[3].is_zero());
}

TEST_CASE("sigma is the Frobenius lift") {
    for (auto [p, a, N] : {std::tuple<uint64_t, unsigned, unsigned>{2, 2, 6},
                           {3, 2, 4},
                           {2, 4, 5},
                           {5, 1, 4}}) {
        auto f = FiniteField::make(p, a);
        auto ring = WittRing::make(f, N);
        Rng rng(17);
        for (int t = 0; t < 15; ++t) {
            WittElement x = ring->sample(rng), y = ring->sample(rng);
            CHECK((x + y).sigma() == x.sigma() + y.sigma());
            CHECK((x * y).sigma() == x.sigma() * y.sigma());
            CHECK(x.sigma((long)a) == x);
            CHECK(x.sigma(-1) == x.sigma((long)a - 1));
            CHECK(x.sigma(1).sigma(-1) == x);
            FFElement c = f->sample(rng);
            CHECK(ring->teichmuller(c).sigma() == ring->teichmuller(c.frobenius()));
        }
    }
}

TEST_CASE("digits peel and reassemble exactly") {
    auto f9 = FiniteField::make(3, 2);
    auto ring = WittRing::make(f9, 5);
    Rng rng(23);
    for (int t = 0; t < 30; ++t) {
        WittElement x = ring->sample(rng);
        CHECK(ring->from_digits(x.digits()) == x);
    }
    // digits(teichmuller(x)) = (x, 0, ..., 0)
    for (const auto& x : f9->elements()) {
        auto d = ring->teichmuller(x).digits();
        CHECK(d[0] == x);
        for (size_t i = 1; i < d.size(); ++i) CHECK(d[i].is_zero());
    }
    // digits(p * 1) = (0, 1, 0, ...)
    auto d = ring->scale_p(ring->one(), 1).digits();
    CHECK(d[0].is_zero());
    CHECK(d[1].is_one());
    CHECK(d[2].is_zero());
}

TEST_CASE("valuation and unit part") {
    auto ring = WittRing::make(FiniteField::make(2, 2), 6);
    WittElement x = ring->from_int(12); // 4 * 3
    CHECK(x.valuation() == 2);
    CHECK(x.unit_part() == ring->from_int(3));
    CHECK(ring->zero().valuation() == 6);
    CHECK_THROWS_AS(ring->zero().unit_part(), PrecisionExhausted);
    CHECK_THROWS_AS(ring->scale_p(ring->one(), 1).inverse(), DivisionByZero);
    WittElement u = ring->from_int(3);
    CHECK(u * u.inverse() == ring->one());
}

TEST_CASE("precision mixing is an error") {
    auto f = FiniteField::make(2, 2);
    auto r4 = WittRing::make(f, 4);
    auto r5 = WittRing::make(f, 5);
    CHECK_THROWS_AS(r4->one() + r5->one(), MixedParents);
    // structurally equal rings interoperate
    auto r4b = WittRing::make(FiniteField::make(2, 2), 4);
    CHECK(r4->one() + r4b->one() == r4b->from_int(2));
}

TEST_CASE("digit cancellation identity") {
    auto f9 = FiniteField::make(3, 2);
    auto ring = WittRing::make(f9, 5);
    Rng rng(31);
    for (int t = 0; t < 50; ++t) {
        WittElement a = ring->sample(rng);
        unsigned n = (unsigned)rng.below(4);
        std::vector<FFElement> bd;
        for (unsigned i = 0; i < 5; ++i) bd.push_back(f9->sample(rng));
        for (unsigned i = 0; i < n; ++i) bd[i] = f9->zero();
        while (bd[n].is_zero()) bd[n] = f9->sample(rng);
        WittElement b = ring->from_digits(bd);
        FFElement lam = -(a.digit(n) * bd[n].inverse());
        WittElement s = a + b * ring->teichmuller(lam);
        for (unsigned i = 0; i < n; ++i) CHECK(s.digit(i) == a.digit(i));
        CHECK(s.digit(n).is_zero());
        // w0 is additive
        WittElement y = ring->sample(rng);
        CHECK((a + y).digit(0) == a.digit(0) + y.digit(0));
    }
}
