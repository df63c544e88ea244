#pragma once

#include <map>

#include "pdiv/combinatorics.hpp"
#include "pdiv/isocrystal.hpp"

namespace pdiv {

/// W(K)-lattice in N_K in column-reduced form: basis vectors with pairwise
/// distinct first-index classes (copy, l mod h), leading digits normalized
/// to 1, and cross-reduced digits (Hermite-style), which makes the basis a
/// canonical invariant of the lattice.
class DieudonneLattice {
  public:
    DieudonneLattice(ShapePtr shape, RingPtr ring, std::vector<IsoVector> basis);

    const ShapePtr& shape() const { return shape_; }
    const RingPtr& ring() const { return ring_; }
    const std::vector<IsoVector>& basis() const { return basis_; }
    size_t rank() const { return basis_.size(); }
    bool full_rank() const { return (long)basis_.size() == shape_->height(); }

    /// Digits of reliability remaining (min over the basis).
    int certified_precision() const;

  private:
    ShapePtr shape_;
    RingPtr ring_;
    std::vector<IsoVector> basis_; // sorted by first index, lexicographic
};

/// Incremental column reduction; the workhorse behind span and the closure
/// worklists. Reduction uses Teichmueller-scaled cancellation against the
/// pivot of the same first-index class; first indices strictly increase, so
/// each insertion terminates within the certified digit window.
class LatticeBuilder {
  public:
    LatticeBuilder(ShapePtr shape, RingPtr ring);

    /// Absorb v; returns true iff the span grew (new pivot or displacement).
    bool insert(IsoVector v);

    /// Remainder of v against the current pivots, without inserting. When
    /// `trail` is given, accumulates the pivot coordinates used, so that
    /// v = sum coeff_key * pivot_key + remainder.
    struct PivotKey {
        size_t copy = 0;
        long r = 0;
        friend auto operator<=>(const PivotKey&, const PivotKey&) = default;
    };
    IsoVector reduce(IsoVector v, std::map<PivotKey, WittElement>* trail = nullptr) const;

    /// Cross-reduce each pivot against the others (canonical form).
    void hermite();

    size_t rank() const { return pivots_.size(); }
    std::vector<IsoVector> sorted_basis() const;
    DieudonneLattice to_lattice();

  private:
    IsoVector normalize_leading(IsoVector v) const;
    ShapePtr shape_;
    RingPtr ring_;
    std::map<PivotKey, IsoVector> pivots_;
};

/// Span of the given vectors; ZeroVector if an input canonicalizes to zero.
DieudonneLattice span(ShapePtr shape, RingPtr ring, const std::vector<IsoVector>& vectors);

/// The minimal lattice M0 = <e_{jil} : l >= 0>.
DieudonneLattice minimal_lattice(ShapePtr shape, RingPtr ring);

bool lattice_equal(const DieudonneLattice& a, const DieudonneLattice& b);
bool lattice_contains(const DieudonneLattice& L, const IsoVector& v);
DieudonneLattice scale_lattice(const DieudonneLattice& L, long k); ///< p^k L

/// True iff F(b) and V(b) re-reduce to zero against the basis for every
/// basis vector b.
bool is_dieudonne(const DieudonneLattice& L);

/// Default worklist cap 4*h*N when cap == 0.
long default_iteration_cap(const IsocrystalShape& shape, const WittRing& ring);

/// Smallest F- and V-stable W-span containing v.
DieudonneLattice dieudonne_closure(const IsoVector& v, long cap = 0);

/// Smallest lattice containing L stable under F, V and all pi_j, sigma_j.
DieudonneLattice p_closure(const DieudonneLattice& L, long cap = 0);

/// p-adic valuation of det(basis in the basis of M0); vol(M0) = 0,
/// vol(p M0) = h.
long vol(const DieudonneLattice& L);

/// dim_K L/(FL + VL), computed as vol(span(F b, V b)) - vol(L).
long a_invariant(const DieudonneLattice& L);

/// First-index semimodule of a full-rank lattice over a simple shape.
SemiModule semimodule_of(const DieudonneLattice& L);

/// vol via the semimodule counting identity |N \ A| - |A \ N| (simple
/// shapes); an independent route used by the verification batteries.
long vol_from_semimodule(const DieudonneLattice& L);

/// The finite index set I and the constant c of the volume formula:
/// the complement of I per copy is the numerical semigroup <m, n> shifted
/// by n * (sum of m over lexicographically earlier copies).
struct IndexSet {
    std::vector<std::pair<size_t, long>> members; // (copy, l), sorted
    long c = 0;
};

IndexSet index_set(const IsocrystalShape& shape);
long c_constant(const IsocrystalShape& shape);

/// Precision policy for a shape battery: N = c + 2h + 4.
unsigned default_precision(const IsocrystalShape& shape);

/// Field-valued point of the affine paving: solves the cycle recursion
/// v_0 = e_{b_0}, v_{i+1} = (F or V^{-1}) v_i + corrections, by fixed-point
/// iteration in the first-index filtration. coords must be indexed exactly
/// by V(B(A)) (tuple positions), else BadCoordinateIndex.
DieudonneLattice lattice_from_cycle_point(
    ShapePtr shape, RingPtr ring, const SemiModule& A,
    const std::map<std::pair<size_t, size_t>, FFElement>& coords, long cap = 0);

} // namespace pdiv
