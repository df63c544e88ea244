#pragma once

#include <map>
#include <optional>

#include "pdiv/shape.hpp"
#include "pdiv/witt.hpp"

namespace pdiv {

/// Vector in the isocrystal N_K with Witt coefficients. Each simple copy
/// (j,i) is stored as p^{-d} * sum_r coef[r] e_{jir} with a per-copy
/// denominator exponent d and h_j Witt coefficients; the digit-stream view
/// over the absolute index grid l in Z is derived from it via
/// p e_{jil} = e_{j,i,l+h_j}.
///
/// Canonical form: each copy is either zero or carries at least one
/// coefficient of valuation 0. `cert` counts the p-adic digits of each
/// coefficient that are still reliable (cancellations cost digits); every
/// statement about a vector is a statement modulo that depth.
class IsoVector {
  public:
    struct Component {
        long denom = 0;
        std::vector<WittElement> coef; // empty <=> zero component
        int cert = 0;
        bool zero() const { return coef.empty(); }
    };

    static IsoVector zero(ShapePtr shape, RingPtr ring);
    static IsoVector basis(ShapePtr shape, RingPtr ring, BasisIndex idx);
    /// For simple shapes: e_l.
    static IsoVector basis(ShapePtr shape, RingPtr ring, long l);
    /// Assemble from explicit components (used by deserialization/tests).
    static IsoVector from_components(ShapePtr shape, RingPtr ring,
                                     std::vector<Component> comps);

    const ShapePtr& shape() const { return shape_; }
    const RingPtr& ring() const { return ring_; }
    const Component& component(size_t copy) const { return comps_[copy]; }

    /// Certified digit depth (min over components).
    int cert() const;

    /// Zero at the certified depth.
    bool is_zero() const;

    IsoVector operator+(const IsoVector& o) const;
    IsoVector operator-(const IsoVector& o) const;
    IsoVector operator-() const;

    /// Multiplication by the Teichmueller scalar [c]; exact (scales every
    /// stream digit by c, no carries).
    IsoVector teich_mul(const FFElement& c) const;
    /// Multiplication by an arbitrary Witt scalar.
    IsoVector scalar_mul(const WittElement& c) const;
    /// Multiplication by p^k, k in Z; pure denominator bookkeeping, exact.
    IsoVector scale_p(long k) const;

    // The semilinear operators. F(e_{jil}) = e_{j,i,l+m_j} with
    // sigma-twisted coefficients; V(e_{jil}) = e_{j,i,l+n_j} with
    // sigma^{-1}-twist; V^{-1} = p^{-1} F.
    IsoVector apply_F() const;
    IsoVector apply_V() const;
    IsoVector apply_Vinv() const;
    /// pi_j: e_{jil} -> e_{j,i,l+1} on summand j (sigma^{b_j} twist),
    /// identity on the other summands.
    IsoVector apply_pi(size_t j) const;
    /// sigma_j: fixes the basis of summand j, sigma^{h_j} twist; identity
    /// elsewhere.
    IsoVector apply_sigma_j(size_t j) const;

    /// Lexicographically least (j,i,l) with a nonzero digit; nullopt for
    /// the zero vector.
    std::optional<BasisIndex> first_index() const;
    /// Digit at first_index(); throws ZeroVector on the zero vector.
    FFElement leading_digit() const;
    /// First index of the (j,i) component alone.
    std::optional<long> component_first_index(size_t copy) const;

    /// l -> digit map of the (j,i) component, certified digits only.
    std::map<long, FFElement> digit_stream(size_t j, long i) const;

    /// Condition (*): for each j, the digits at l = 0 of the copies
    /// (j,1..l_j) are linearly independent over F_{p^{h_j}}. Throws
    /// UnsupportedResidueField unless every h_j divides the field degree,
    /// NotNormalized if a nonzero component has minimal index != 0.
    bool condition_star() const;

    /// Equality at the joint certified depth; also reports that depth.
    friend std::pair<bool, int> equal_with_depth(const IsoVector& a, const IsoVector& b);
    bool operator==(const IsoVector& o) const;
    bool operator!=(const IsoVector& o) const { return !(*this == o); }

    std::string str() const; ///< vector literal grammar form

  private:
    IsoVector(ShapePtr shape, RingPtr ring);
    void canonicalize();
    IsoVector apply_semilinear(const std::vector<long>& twist,
                               const std::vector<long>& shift) const;

    ShapePtr shape_;
    RingPtr ring_;
    std::vector<Component> comps_; // one per copy, in shape copy order
};

/// Uniform random vector supported on l >= 0 (full coefficient tuples at
/// denominator 0).
IsoVector sample_vector(const ShapePtr& shape, const RingPtr& ring, Rng& rng);

/// Rejection-samples a vector satisfying condition (*) with all component
/// first indices at l = 0 and support l >= 0. Expected number of rounds is
/// q/(q-1) per leading digit for simple shapes (rejection only discards the
/// leading digits, never the tail).
IsoVector sample_condition_star(const ShapePtr& shape, const RingPtr& ring, Rng& rng);

} // namespace pdiv
