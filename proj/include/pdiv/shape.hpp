#pragma once

#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "pdiv/errors.hpp"

namespace pdiv {

/// One isotypic summand: slope m/(m+n) with multiplicity `mult`. Coprime
/// (m, m+n); the degenerate pairs (0,1) and (1,0) encode the etale and
/// multiplicative summands.
struct Summand {
    long m = 0;
    long n = 1;
    long mult = 1;
    long h() const { return m + n; }
    bool bi_infinitesimal() const { return m >= 1 && n >= 1; }
};

/// The isotypic shape of an isocrystal: summands with strictly increasing
/// slopes. Fixes the basis e_{jil}, the Bezout exponents of the pi_j, and all
/// dimension bookkeeping. Immutable.
class IsocrystalShape {
  public:
    /// One simple copy after expanding multiplicities, in lexicographic
    /// (j, i) order.
    struct Copy {
        size_t j = 0; // summand index, 0-based
        long i = 0;   // copy index within the summand, 0-based
        long m = 0, n = 0, h = 0;
    };

    /// Validates: coprimality of each (m, h), slopes strictly increasing,
    /// multiplicities >= 1. Summands must be given sorted by slope; equal
    /// slopes are merged by the parser before this is called.
    explicit IsocrystalShape(std::vector<Summand> summands);

    /// Convenience: merges equal slopes and sorts by slope first.
    static std::shared_ptr<const IsocrystalShape> make(std::vector<Summand> summands);
    static std::shared_ptr<const IsocrystalShape> simple(long m, long n);

    const std::vector<Summand>& summands() const { return summands_; }
    const std::vector<Copy>& copies() const { return copies_; }
    size_t copy_index(size_t j, long i) const; ///< flat index of copy (j, i)

    long height() const { return height_; }
    bool is_simple() const { return copies_.size() == 1; }
    bool is_bi_infinitesimal() const; ///< all slopes strictly inside (0,1)
    bool is_ordinary() const;         ///< slopes only 0 and 1

    /// Bezout pair for summand j: a*h_j + b*m_j = 1.
    std::pair<long, long> bezout(size_t j) const { return bezout_[j]; }

    /// lcm of the h_j; condition-(*) work needs the residue field degree to
    /// be a multiple of this.
    long lcm_heights() const;

    /// Number of simple summands (sum of multiplicities).
    long summand_count() const;

    std::string str() const; ///< "2:3^2,1:1" grammar form

    bool same_as(const IsocrystalShape& o) const;

  private:
    std::vector<Summand> summands_;
    std::vector<Copy> copies_;
    std::vector<std::pair<long, long>> bezout_;
    long height_ = 0;
};

using ShapePtr = std::shared_ptr<const IsocrystalShape>;

/// Index of a basis vector e_{jil}; j and i are 0-based internally (the
/// grammar and JSON use 1-based display). Ordering is lexicographic on
/// (j, i, l).
struct BasisIndex {
    size_t j = 0;
    long i = 0;
    long l = 0;
    friend bool operator==(const BasisIndex&, const BasisIndex&) = default;
    friend auto operator<=>(const BasisIndex& a, const BasisIndex& b) {
        if (auto c = a.j <=> b.j; c != 0) return c;
        if (auto c = a.i <=> b.i; c != 0) return c;
        return a.l <=> b.l;
    }
};

} // namespace pdiv
