#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "pdiv/finite_field.hpp"

namespace pdiv {

class WittRing;
using RingPtr = std::shared_ptr<const WittRing>;

/// Element of W(F_{p^a})/p^N. Stored as a polynomial of degree < a over
/// Z/p^N in the class of x for a fixed monic lift of the field modulus;
/// all ring operations are plain modular polynomial arithmetic.
class WittElement {
  public:
    WittElement() = default;
    WittElement(RingPtr ring, std::vector<uint64_t> coeffs);

    const RingPtr& ring() const { return ring_; }
    const std::vector<uint64_t>& coeffs() const { return c_; }

    bool is_zero() const;

    WittElement operator+(const WittElement& o) const;
    WittElement operator-(const WittElement& o) const;
    WittElement operator-() const;
    WittElement operator*(const WittElement& o) const;
    bool operator==(const WittElement& o) const;
    bool operator!=(const WittElement& o) const { return !(*this == o); }

    /// k-fold Frobenius lift; fixes Z/p^N, sends [x] to [x^p]. Negative k is
    /// the inverse (sigma has order a on this ring, see WittRing::make).
    WittElement sigma(long k = 1) const;

    /// min i with digit_i != 0, or N for (a truncated) zero. Equals the
    /// largest k with p^k dividing every coefficient representative.
    unsigned valuation() const;

    /// x / p^{valuation(x)}; certified to N - valuation digits. Throws
    /// PrecisionExhausted on a truncated zero (valuation >= N).
    WittElement unit_part() const;

    /// Inverse of a unit (valuation 0); DivisionByZero otherwise.
    WittElement inverse() const;

    /// Reduction mod p into the residue field (= digit 0).
    FFElement residue() const;

    /// Teichmueller digit expansion: x = sum [d_i] p^i exactly, N digits.
    std::vector<FFElement> digits() const;

    /// Digit at one position without materializing the full stream.
    FFElement digit(unsigned i) const;

  private:
    friend class WittRing;
    RingPtr ring_;
    std::vector<uint64_t> c_; // size a, entries < p^N
};

/// The truncated Witt ring W(F_{p^a})/p^N, i.e. the ring of integers of the
/// unramified degree-a extension of Q_p modulo p^N. The Frobenius is computed
/// once at construction by Hensel-lifting the residue Frobenius to the root
/// of the lifted modulus congruent to x^p; sigma^a = id holds exactly here
/// (finite residue field), which the constructor asserts, so negative powers
/// are powers of the inverse root.
class WittRing : public std::enable_shared_from_this<WittRing> {
  public:
    /// precision N >= 1. Requires p^N < 2^62 (checked).
    static RingPtr make(FieldPtr base, unsigned precision);

    const FieldPtr& base() const { return base_; }
    unsigned precision() const { return prec_; }
    uint64_t p() const { return base_->p(); }
    uint64_t p_pow_n() const { return pN_; }
    unsigned degree() const { return base_->degree(); }

    WittElement zero() const;
    WittElement one() const;
    WittElement from_int(long long n) const;
    WittElement from_coeffs(std::vector<uint64_t> coeffs) const;

    /// Teichmueller representative: reduces to x mod p and is a (q-1)-th
    /// root of unity or 0; computed as the stable value of z -> z^q.
    /// Multiplicative. Results are memoized per ring (thread-safe).
    WittElement teichmuller(const FFElement& x) const;

    /// sum [d_i] p^i from a digit stream (at most N digits used).
    WittElement from_digits(const std::vector<FFElement>& digits) const;

    /// p^k * x for k >= 0.
    WittElement scale_p(const WittElement& x, unsigned k) const;

    WittElement sample(Rng& rng) const;

    bool same_as(const WittRing& o) const;

  private:
    WittRing(FieldPtr base, unsigned precision);
    void init_frobenius();

    friend class WittElement;

    std::vector<uint64_t> reduce_poly(std::vector<uint64_t> f) const;
    std::vector<uint64_t> poly_mul_mod(const std::vector<uint64_t>& f,
                                       const std::vector<uint64_t>& g) const;
    WittElement eval_at(const std::vector<uint64_t>& poly_coeffs,
                        const std::vector<WittElement>& point_powers) const;

    FieldPtr base_;
    unsigned prec_;
    uint64_t pN_;
    std::vector<uint64_t> lifted_mod_; // monic, size a+1, entries < p^N

    // sigma_pows_[k][j] = coefficients of sigma^k(x)^j, j = 0..a-1; applying
    // sigma^k is a Z/p^N-linear combination of these.
    std::vector<std::vector<std::vector<uint64_t>>> sigma_pows_;

    mutable std::mutex teich_mutex_;
    mutable std::unordered_map<uint64_t, std::vector<uint64_t>> teich_cache_;
};

} // namespace pdiv
