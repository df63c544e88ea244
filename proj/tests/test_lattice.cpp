#include <doctest.h>

#include "oracles.hpp"
#include "pdiv/grammar.hpp"
#include "pdiv/json_out.hpp"

using namespace pdiv;

namespace {

struct Setup {
    ShapePtr shape;
    RingPtr ring;
    Setup(const std::string& s, uint64_t p, unsigned a = 0, unsigned N = 0)
        : shape(parse_shape(s)) {
        unsigned deg = a ? a : (unsigned)(2 * shape->lcm_heights());
        unsigned prec = N ? N : default_precision(*shape);
        ring = WittRing::make(FiniteField::make(p, deg), prec);
    }
    IsoVector e(long l) const { return IsoVector::basis(shape, ring, l); }
    IsoVector vec(const std::string& s) const { return parse_vector(s, shape, ring); }
};

// random W-combinations of the basis plus occasional p-scalings, inside M0
DieudonneLattice random_sublattice_of_M0(const Setup& s, Rng& rng) {
    auto M0 = minimal_lattice(s.shape, s.ring);
    std::vector<IsoVector> gens = M0.basis();
    int moves = 3 + (int)rng.below(6);
    for (int t = 0; t < moves; ++t) {
        size_t i = (size_t)rng.below(gens.size());
        size_t j = (size_t)rng.below(gens.size());
        if (i == j) {
            gens[i] = gens[i].scale_p(1);
        } else {
            WittElement c = s.ring->sample(rng);
            gens[i] = gens[i] + gens[j].scalar_mul(c);
        }
    }
    return span(s.shape, s.ring, gens);
}

} // namespace

TEST_CASE("span basics on shape (2,3)") {
    Setup s("2:3", 2, 4, 9);
    auto M0 = minimal_lattice(s.shape, s.ring);
    CHECK(M0.rank() == 5);
    CHECK(vol(M0) == 0);
    CHECK(lattice_equal(span(s.shape, s.ring, {s.e(0), s.e(1), s.e(2), s.e(3), s.e(4)}), M0));
    // column operations do not change the span
    FFElement a = s.ring->base()->gen();
    auto L1 = span(s.shape, s.ring, {s.e(0) + s.e(1).teich_mul(a), s.e(1)});
    auto L2 = span(s.shape, s.ring, {s.e(0), s.e(1)});
    CHECK(lattice_equal(L1, L2));
    CHECK_THROWS_AS(span(s.shape, s.ring, {IsoVector::zero(s.shape, s.ring)}), ZeroVector);
}

TEST_CASE("span is idempotent and canonical") {
    Setup s("2:3", 2, 10);
    Rng rng(41);
    for (int t = 0; t < 5; ++t) {
        DieudonneLattice L = random_sublattice_of_M0(s, rng);
        DieudonneLattice L2 = span(s.shape, s.ring, L.basis());
        CHECK(lattice_equal(L, L2));
        // recombining the basis leaves the canonical form unchanged
        std::vector<IsoVector> mixed = L.basis();
        mixed[0] = mixed[0] + mixed[1].scalar_mul(s.ring->sample(rng));
        mixed.push_back(mixed[2].scale_p(1));
        DieudonneLattice L3 = span(s.shape, s.ring, mixed);
        CHECK(lattice_equal(L, L3));
        CHECK(lattice_to_json(L).dump() == lattice_to_json(L3).dump());
    }
}

TEST_CASE("closure of e_0 on shape (1,1) is M0") {
    Setup s("1:1", 2, 2, 8);
    DieudonneLattice L = dieudonne_closure(s.e(0));
    CHECK(lattice_equal(L, minimal_lattice(s.shape, s.ring)));
    CHECK(vol(L) == 0);
    CHECK(is_dieudonne(L));
}

TEST_CASE("closure of e_0 on shape (2,3): vol equals the length oracle") {
    Setup s("2:3", 2, 10);
    DieudonneLattice L = dieudonne_closure(s.e(0));
    CHECK(is_dieudonne(L));
    CHECK(vol(L) == 1); // = c
    CHECK(oracle::smith_length_in_M0(L) == 1);
    SemiModule A = semimodule_of(L);
    CHECK(A.fringe == std::vector<long>({0, 2, 3, 4, 6})); // the <2,3> pattern
    CHECK(vol_from_semimodule(L) == 1);
    CHECK(a_invariant(L) == 1);
    CHECK(oracle::a_invariant_modp(L) == 1);
}

TEST_CASE("closures of condition-(*) generators: vol = c, a = 1, P(M) = M0") {
    for (auto [sh, p] :
         std::vector<std::pair<std::string, uint64_t>>{{"2:3", 2}, {"3:2", 3}, {"1:1^2", 2}}) {
        Setup s(sh, p, sh == "1:1^2" ? 4 : 0); // F_16 for the multi-summand case
        long c = c_constant(*s.shape);
        auto M0 = minimal_lattice(s.shape, s.ring);
        Rng rng(43 + p);
        for (int t = 0; t < 3; ++t) {
            IsoVector v = sample_condition_star(s.shape, s.ring, rng);
            DieudonneLattice L = dieudonne_closure(v);
            CHECK(is_dieudonne(L));
            CHECK(vol(L) == c);
            CHECK(a_invariant(L) == 1);
            CHECK(oracle::a_invariant_modp(L) == 1);
            CHECK(lattice_equal(p_closure(L), M0));
        }
    }
}

TEST_CASE("a-invariant of minimal lattices") {
    Setup s13("1:3", 2, 8, 9);
    CHECK(a_invariant(minimal_lattice(s13.shape, s13.ring)) == 1);
    CHECK(oracle::a_invariant_modp(minimal_lattice(s13.shape, s13.ring)) == 1);
    Setup s23("2:3", 2, 10);
    auto M0 = minimal_lattice(s23.shape, s23.ring);
    CHECK(a_invariant(M0) == 2);
    CHECK(oracle::a_invariant_modp(M0) == 2);
    CHECK(lattice_equal(p_closure(M0), M0));
}

TEST_CASE("vol: scaling, Smith agreement, precision exhaustion") {
    Setup s("2:3", 2, 4, 9);
    auto M0 = minimal_lattice(s.shape, s.ring);
    CHECK(vol(scale_lattice(M0, 1)) == 5);
    CHECK(vol(scale_lattice(M0, 2)) == 10);
    Rng rng(47);
    for (int t = 0; t < 20; ++t) {
        DieudonneLattice L = random_sublattice_of_M0(s, rng);
        CHECK(vol(L) == oracle::smith_length_in_M0(L));
    }
    // p-power scalings live in the denominator exponents, so vol(p^k M0)
    // stays exact even when k*h exceeds the digit precision
    Setup tiny("2:3", 2, 4, 3);
    auto M0t = minimal_lattice(tiny.shape, tiny.ring);
    CHECK(vol(scale_lattice(M0t, 3)) == 15);
    CHECK_THROWS_AS(M0t.basis()[0].component(0).coef[0].digit(5), PrecisionExhausted);
}

TEST_CASE("semimodule of the Case-2 display lattice") {
    Setup s("2:3", 2, 6, 11);
    FFElement a = s.ring->base()->gen();
    // <e_{-1} + [a^sigma] e_0, e_1, e_2, e_3, e_5>
    IsoVector v = s.e(-1) + s.e(0).teich_mul(a.frobenius());
    DieudonneLattice L = span(s.shape, s.ring, {v, s.e(1), s.e(2), s.e(3), s.e(5)});
    CHECK(is_dieudonne(L));
    CHECK(vol(L) == 0);
    SemiModule A = semimodule_of(L);
    CHECK(A.fringe == std::vector<long>({-1, 1, 2, 3, 5}));
    CHECK(A.is_normalized());
    CHECK(vol_from_semimodule(L) == 0);
}

TEST_CASE("index sets") {
    auto I23 = index_set(*parse_shape("2:3"));
    CHECK(I23.c == 1);
    CHECK(I23.members == std::vector<std::pair<size_t, long>>({{0, 1}}));
    auto I14 = index_set(*parse_shape("1:4"));
    CHECK(I14.c == 0);
    CHECK(I14.members.empty());
    auto Imix = index_set(*parse_shape("1:2,1:1"));
    CHECK(Imix.c == 1);
    CHECK(Imix.members == std::vector<std::pair<size_t, long>>({{1, 0}}));
    CHECK(index_set(*parse_shape("2:3^2")).c == 8);
    CHECK(index_set(*parse_shape("3:4")).c == 3);
    CHECK_THROWS_AS(index_set(*parse_shape("0:1,1:1")), Error);
}

TEST_CASE("paving points: zero coordinates give the basis lattice") {
    Setup s("2:3", 2, 3, 11); // F_8
    for (const auto& B : enumerate_cycles(2, 3)) {
        SemiModule A = semimodule_from_cycle(B);
        std::map<std::pair<size_t, size_t>, FFElement> coords;
        for (auto key : B.vb_pairs()) coords[key] = s.ring->base()->zero();
        DieudonneLattice L = lattice_from_cycle_point(s.shape, s.ring, A, coords);
        std::vector<IsoVector> expect;
        for (long b : B.values) expect.push_back(s.e(b));
        CHECK(lattice_equal(L, span(s.shape, s.ring, expect)));
        CHECK(vol(L) == 0);
        CHECK(semimodule_of(L) == A);
    }
}

TEST_CASE("paving point matches the Case-2 display lattice") {
    Setup s("2:3", 2, 3, 11); // F_8
    SemiModule A{2, 3, {-1, 1, 2, 3, 5}};
    FFElement a = s.ring->base()->gen();
    DieudonneLattice L =
        lattice_from_cycle_point(s.shape, s.ring, A, {{{4, 1}, a}});
    IsoVector v = s.e(-1) + s.e(0).teich_mul(a.frobenius());
    DieudonneLattice display = span(s.shape, s.ring, {v, s.e(1), s.e(2), s.e(3), s.e(5)});
    CHECK(lattice_equal(L, display));
    CHECK(is_dieudonne(L));
    CHECK(semimodule_of(L) == A);
    // injectivity over F_8 for this semimodule
    std::set<std::string> prints;
    for (const auto& c : s.ring->base()->elements()) {
        DieudonneLattice Lc = lattice_from_cycle_point(s.shape, s.ring, A, {{{4, 1}, c}});
        CHECK(semimodule_of(Lc) == A);
        prints.insert(lattice_to_json(Lc).dump());
    }
    CHECK(prints.size() == 8);
    // wrong coordinate key set
    CHECK_THROWS_AS(lattice_from_cycle_point(s.shape, s.ring, A, {}), BadCoordinateIndex);
}

TEST_CASE("containment and closure caps") {
    Setup s("2:3", 2, 4, 9);
    auto M0 = minimal_lattice(s.shape, s.ring);
    CHECK(lattice_contains(M0, s.e(0)));
    CHECK(lattice_contains(M0, s.vec("e_3 + [x]e_7")));
    CHECK_FALSE(lattice_contains(M0, s.e(-1)));
    CHECK_THROWS_AS(dieudonne_closure(s.e(0), 1), IterationCap);
}

TEST_CASE("lattice JSON carries schema, shape, and digit streams") {
    Setup s("2:3", 2, 4, 9);
    auto M0 = minimal_lattice(s.shape, s.ring);
    Json j = lattice_to_json(M0);
    CHECK(j["schema"] == 1);
    CHECK(j["shape"] == "2:3");
    CHECK(j["basis"].size() == 5);
    CHECK(j["field"]["p"] == 2);
    CHECK(j["basis"][0]["first_index"] == Json::array({1, 1, 0}));
}
