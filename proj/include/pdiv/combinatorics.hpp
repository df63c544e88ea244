#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "pdiv/shape.hpp"

namespace pdiv {

using Rational = boost::rational<long long>;

/// Semimodule A in Z: bounded below, m+A and n+A inside A. Stored by its
/// fringe A \ (h+A) (= the cycle values), which hits every residue class
/// mod h exactly once.
struct SemiModule {
    long m = 0, n = 0;
    std::vector<long> fringe; // sorted ascending

    long h() const { return m + n; }
    bool member(long x) const;
    /// |N \ A| and |A \ N|.
    long missing_naturals() const;
    long negatives() const;
    /// normalised iff |N \ A| == |A \ N| (equivalently sum of the cycle
    /// values equals h(h-1)/2).
    bool is_normalized() const;
    SemiModule normalize() const; ///< the unique integral shift; see errors
    SemiModule shifted(long t) const;

    /// Validates fringe residues and m/n-stability; throws NotASemimodule.
    void validate() const;

    /// Smallest semimodule containing the given generators.
    static SemiModule closure(long m, long n, const std::vector<long>& gens);

    friend bool operator==(const SemiModule&, const SemiModule&) = default;
    std::string str() const; ///< comma list of fringe values
};

/// Cycle B = (b_0, ..., b_{h-1}): b_0 largest, consecutive steps +m or -n,
/// wrap b_{h-1} + m = b_0; the fringe of a semimodule arranged cyclically.
struct Cycle {
    long m = 0, n = 0;
    std::vector<long> values;

    long h() const { return m + n; }
    bool is_normalized() const; ///< sum == h(h-1)/2
    void validate() const;      ///< structural invariants; throws on failure

    /// B+ = {b : b+m in B}, B- = {b : b-n in B}; disjoint cover of B.
    std::vector<size_t> plus_positions() const;
    std::vector<size_t> minus_positions() const;
    /// V(B) = {(d,i) : b_d in B+, b_i in B-, b_i < b_d} as tuple positions.
    std::vector<std::pair<size_t, size_t>> vb_pairs() const;

    friend bool operator==(const Cycle&, const Cycle&) = default;
};

/// Mutually inverse bijections between semimodules and cycles.
Cycle cycle_from_semimodule(const SemiModule& a);
SemiModule semimodule_from_cycle(const Cycle& b);

/// All normalised cycles for coprime (m, n), sorted by value tuple. Their
/// number is C(h, m)/h, which enumerate_cycles asserts.
std::vector<Cycle> enumerate_cycles(long m, long n);

/// C(h, m)/h evaluated exactly (128-bit intermediate).
unsigned long long cycle_count_formula(long m, long n);
unsigned long long binomial(unsigned h, unsigned k);

/// Betti profile: d[j] = number of normalised cycles with |V(B)| = j,
/// j = 0..dim, dim = (m-1)(n-1)/2.
struct PavingProfile {
    long m = 0, n = 0;
    long dim = 0;
    std::vector<long> d;
    long euler() const;
};

PavingProfile paving_profile(long m, long n);

/// Both dimension formulas; they are asserted equal and integral
/// (FormulaMismatch must never fire).
Rational dim_formula(const IsocrystalShape& shape);
Rational dim_rho_formula(const IsocrystalShape& shape);
long defect(const IsocrystalShape& shape); ///< h - number of simple summands
/// dim_formula with the equality assertion and integrality check applied.
long moduli_dimension(const IsocrystalShape& shape);

/// Connected-component descriptor: the pi_0 is a product of two lattice
/// sets of the stated heights, times Z exactly when a bi-infinitesimal part
/// is present.
struct Pi0Descriptor {
    long ht_mult = 0;
    long ht_et = 0;
    bool has_bi = false;
    friend bool operator==(const Pi0Descriptor&, const Pi0Descriptor&) = default;
};

Pi0Descriptor pi0_descriptor(const IsocrystalShape& shape);

/// Witness (a, b) with a*h + b*m = target for a simple bi-infinitesimal
/// summand of the shape (quasi-isogeny height reachability). Throws
/// NoBiPart when the shape has no bi-infinitesimal summand.
std::pair<long, long> height_reachability(long m, long n, long target);
std::pair<long, long> height_reachability(const IsocrystalShape& shape, long target);

enum class Smoothness { SmoothDim0, SmoothP1, NotSmooth };

struct SmoothnessVerdict {
    Smoothness verdict = Smoothness::NotSmooth;
    std::string reason; // "ordinary", "min-one", "slope-2-5-or-3-5",
                        // "components-not-irreducible", "tangent-space-excess",
                        // "poincare-duality-fails"
};

SmoothnessVerdict smoothness(const IsocrystalShape& shape);
std::string smoothness_name(Smoothness s);

} // namespace pdiv
