#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "pdiv/errors.hpp"
#include "pdiv/rng.hpp"

namespace pdiv {

class FiniteField;
using FieldPtr = std::shared_ptr<const FiniteField>;

/// Element of F_{p^a}, stored as a polynomial of degree < a over the prime
/// field in the generator of the parent's quotient ring.
class FFElement {
  public:
    FFElement() = default;
    FFElement(FieldPtr field, std::vector<uint64_t> coeffs);

    const FieldPtr& field() const { return field_; }
    const std::vector<uint64_t>& coeffs() const { return c_; }

    bool is_zero() const;
    bool is_one() const;

    FFElement operator+(const FFElement& o) const;
    FFElement operator-(const FFElement& o) const;
    FFElement operator-() const;
    FFElement operator*(const FFElement& o) const;
    bool operator==(const FFElement& o) const;
    bool operator!=(const FFElement& o) const { return !(*this == o); }

    FFElement inverse() const; ///< throws DivisionByZero on 0
    FFElement pow(uint64_t e) const;

    /// k-fold Frobenius x -> x^{p^k}; k may be negative (the Frobenius has
    /// order a on F_{p^a}, so the inverse is well defined).
    FFElement frobenius(long k = 1) const;

    /// "x^2+x+1" style display, or "0"/"1"/field constants.
    std::string str() const;

    /// Packs the coefficient vector into 64 bits for hashing; requires the
    /// field to be small enough (always true for the fields used here).
    uint64_t pack() const;

  private:
    friend class FiniteField;
    FieldPtr field_;
    std::vector<uint64_t> c_; // size a, entries < p
};

/// F_{p^a} presented as F_p[x]/(modulus) with a monic irreducible modulus.
class FiniteField : public std::enable_shared_from_this<FiniteField> {
  public:
    /// Deterministic construction: the modulus is the first monic irreducible
    /// polynomial of degree a in base-p counting order of the lower
    /// coefficients. Gives F_2[x]/(x^2+x+1) for (2,2), F_3[x]/(x^2+1) for (3,2).
    static FieldPtr make(uint64_t p, unsigned degree);

    /// Construction with an explicit monic modulus (validated irreducible).
    static FieldPtr make(uint64_t p, std::vector<uint64_t> modulus);

    uint64_t p() const { return p_; }
    unsigned degree() const { return a_; }
    /// q = p^a (fits in 64 bits for every field this library constructs).
    uint64_t order() const { return q_; }
    const std::vector<uint64_t>& modulus() const { return mod_; }

    FFElement zero() const;
    FFElement one() const;
    FFElement gen() const; ///< the class of x
    FFElement from_coeffs(std::vector<uint64_t> coeffs) const;
    FFElement from_int(uint64_t n) const; ///< n mod p as a constant

    /// Uniformly random element.
    FFElement sample(Rng& rng) const;
    /// Enumerate all q elements (small fields only; used by exhaustive tests).
    std::vector<FFElement> elements() const;

    /// True iff no nontrivial F_{p^d}-linear combination of elems vanishes,
    /// where F_{p^d} is the fixed field of Frobenius^d inside this field.
    /// Decided as a rank computation over the prime field.
    /// Throws UnsupportedResidueField unless d divides the degree.
    bool subfield_linearly_independent(const std::vector<FFElement>& elems,
                                       unsigned subfield_degree) const;

    /// F_p-basis of the subfield F_{p^d} (kernel of Frobenius^d - id).
    std::vector<FFElement> subfield_basis(unsigned subfield_degree) const;

    bool same_as(const FiniteField& o) const;

  private:
    FiniteField(uint64_t p, unsigned a, std::vector<uint64_t> modulus);

    friend class FFElement;
    uint64_t p_;
    unsigned a_;
    uint64_t q_;
    std::vector<uint64_t> mod_; // monic, size a_+1
};

} // namespace pdiv
