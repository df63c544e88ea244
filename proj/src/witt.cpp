#include "pdiv/witt.hpp"

#include <algorithm>
#include <cassert>

namespace pdiv {

namespace {

uint64_t addm(uint64_t a, uint64_t b, uint64_t m) {
    uint64_t r = a + b;
    if (r >= m) r -= m;
    return r;
}
uint64_t subm(uint64_t a, uint64_t b, uint64_t m) { return addm(a, m - b % m, m); }
uint64_t mulm(uint64_t a, uint64_t b, uint64_t m) {
    return (uint64_t)((unsigned __int128)a * b % m);
}

unsigned val_p(uint64_t x, uint64_t p, unsigned cap) {
    if (x == 0) return cap;
    unsigned v = 0;
    while (v < cap && x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

} // namespace

WittRing::WittRing(FieldPtr base, unsigned precision) : base_(std::move(base)), prec_(precision) {
    if (prec_ < 1) throw Error("precision must be >= 1");
    uint64_t p = base_->p();
    pN_ = 1;
    for (unsigned i = 0; i < prec_; ++i) {
        if (pN_ > (uint64_t(1) << 62) / p)
            throw Error("p^N exceeds 2^62; lower the precision");
        pN_ *= p;
    }
    lifted_mod_.assign(base_->modulus().begin(), base_->modulus().end());
}

RingPtr WittRing::make(FieldPtr base, unsigned precision) {
    auto r = RingPtr(new WittRing(std::move(base), precision));
    const_cast<WittRing*>(r.get())->init_frobenius();
    return r;
}

bool WittRing::same_as(const WittRing& o) const {
    return prec_ == o.prec_ && base_->same_as(*o.base_);
}

std::vector<uint64_t> WittRing::reduce_poly(std::vector<uint64_t> f) const {
    unsigned a = degree();
    // reduce degree >= a terms by the monic lifted modulus
    for (size_t i = f.size(); i-- > a;) {
        uint64_t c = f[i];
        if (c) {
            for (unsigned j = 0; j < a; ++j)
                f[i - a + j] = subm(f[i - a + j], mulm(c, lifted_mod_[j], pN_), pN_);
        }
        f[i] = 0;
    }
    f.resize(a, 0);
    return f;
}

std::vector<uint64_t> WittRing::poly_mul_mod(const std::vector<uint64_t>& f,
                                             const std::vector<uint64_t>& g) const {
    unsigned a = degree();
    std::vector<uint64_t> prod(2 * a, 0);
    for (unsigned i = 0; i < a; ++i) {
        if (!f[i]) continue;
        for (unsigned j = 0; j < a; ++j) {
            if (!g[j]) continue;
            prod[i + j] = (uint64_t)(((unsigned __int128)f[i] * g[j] + prod[i + j]) % pN_);
        }
    }
    return reduce_poly(std::move(prod));
}

WittElement WittRing::zero() const { return from_coeffs({}); }
WittElement WittRing::one() const { return from_coeffs({1}); }

WittElement WittRing::from_int(long long n) const {
    long long m = n % (long long)pN_;
    if (m < 0) m += (long long)pN_;
    return from_coeffs({(uint64_t)m});
}

WittElement WittRing::from_coeffs(std::vector<uint64_t> coeffs) const {
    for (auto& c : coeffs) c %= pN_;
    if (coeffs.size() > degree()) coeffs = reduce_poly(std::move(coeffs));
    coeffs.resize(degree(), 0);
    return WittElement(shared_from_this(), std::move(coeffs));
}

WittElement WittRing::sample(Rng& rng) const {
    std::vector<uint64_t> c(degree());
    for (auto& x : c) x = rng.below(pN_);
    return WittElement(shared_from_this(), std::move(c));
}

WittElement WittRing::scale_p(const WittElement& x, unsigned k) const {
    uint64_t pk = 1;
    for (unsigned i = 0; i < k && pk < pN_; ++i) pk *= p();
    std::vector<uint64_t> c(x.coeffs());
    for (auto& v : c) v = mulm(v, pk % pN_, pN_);
    return WittElement(shared_from_this(), std::move(c));
}

void WittRing::init_frobenius() {
    unsigned a = degree();
    uint64_t p = this->p();

    // Hensel root of the lifted modulus congruent to x^p mod p.
    // Newton iteration z <- z - f(z)/f'(z); f' is a unit at z since the
    // residue modulus is separable.
    auto self = shared_from_this();
    auto eval_poly = [&](const std::vector<uint64_t>& poly, const WittElement& z) {
        WittElement acc = zero();
        for (size_t i = poly.size(); i-- > 0;) {
            acc = acc * z;
            acc = acc + from_coeffs({poly[i]});
        }
        return acc;
    };
    std::vector<uint64_t> deriv(a, 0);
    for (unsigned i = 1; i <= a; ++i)
        deriv[i - 1] = mulm(lifted_mod_[i], i % pN_, pN_);

    sigma_pows_.clear(); // init in progress: WittElement ops below avoid sigma

    // start from x^p
    std::vector<uint64_t> xp(a, 0);
    {
        std::vector<uint64_t> acc{1};
        std::vector<uint64_t> base(a, 0);
        if (a == 1) {
            // residue field is F_p: sigma is the identity, root is x itself
            xp = reduce_poly({0, 1});
        } else {
            base[1] = 1;
            uint64_t e = p;
            acc.resize(a, 0);
            acc[0] = 1;
            while (e) {
                if (e & 1) acc = poly_mul_mod(acc, base);
                base = poly_mul_mod(base, base);
                e >>= 1;
            }
            xp = acc;
        }
    }
    WittElement z = WittElement(self, xp);
    for (int it = 0; it < 40; ++it) {
        WittElement fz = eval_poly(lifted_mod_, z);
        if (fz.is_zero()) break;
        WittElement fpz = eval_poly(deriv, z);
        // fpz is a unit: invert coefficientwise via the ring inverse
        WittElement corr = fz * fpz.inverse();
        z = z - corr;
    }
    if (!eval_poly(lifted_mod_, z).is_zero())
        throw Error("Hensel iteration for the Frobenius root failed"); // unreachable

    // powers of the a automorphism orbit: sigma_pows_[k][j] = (sigma^k x)^j
    sigma_pows_.assign(a, {});
    std::vector<uint64_t> sk = z.coeffs(); // sigma^1(x)
    // sigma^0 handled as identity shortcut in sigma(); still record powers of x
    {
        sigma_pows_[0].resize(a);
        std::vector<uint64_t> pw(a, 0);
        pw[0] = 1;
        std::vector<uint64_t> xv(a, 0);
        if (a > 1)
            xv[1] = 1;
        else
            xv = reduce_poly({0, 1});
        for (unsigned j = 0; j < a; ++j) {
            sigma_pows_[0][j] = pw;
            pw = poly_mul_mod(pw, xv);
        }
    }
    for (unsigned k = 1; k < a; ++k) {
        sigma_pows_[k].resize(a);
        std::vector<uint64_t> pw(a, 0);
        pw[0] = 1;
        for (unsigned j = 0; j < a; ++j) {
            sigma_pows_[k][j] = pw;
            pw = poly_mul_mod(pw, sk);
        }
        // advance: sigma^{k+1}(x) = sigma^k(x) evaluated at the sigma root
        if (k + 1 < a) {
            std::vector<uint64_t> next(a, 0);
            for (unsigned j = 0; j < a; ++j) {
                if (!sk[j]) continue;
                for (unsigned t = 0; t < a; ++t)
                    next[t] = (uint64_t)(((unsigned __int128)sk[j] * sigma_pows_[1][j][t] + next[t]) % pN_);
            }
            sk = next;
        }
    }
    // orbit must close: sigma^a = id
    if (a > 1) {
        std::vector<uint64_t> last = sigma_pows_[a - 1][1]; // sigma^{a-1}(x)
        std::vector<uint64_t> closed(a, 0);
        // evaluate at sigma(x) once more
        for (unsigned j = 0; j < a; ++j) {
            if (!last[j]) continue;
            for (unsigned t = 0; t < a; ++t)
                closed[t] = (uint64_t)(((unsigned __int128)last[j] * sigma_pows_[1][j][t] + closed[t]) % pN_);
        }
        std::vector<uint64_t> xv(a, 0);
        xv[1] = 1;
        if (closed != xv) throw Error("Frobenius orbit failed to close"); // unreachable
    }
}

WittElement WittRing::teichmuller(const FFElement& x) const {
    if (!x.field()->same_as(*base_)) throw MixedParents("element not in the residue field");
    uint64_t key = x.pack();
    {
        std::lock_guard<std::mutex> lk(teich_mutex_);
        auto it = teich_cache_.find(key);
        if (it != teich_cache_.end()) return WittElement(shared_from_this(), it->second);
    }
    // iterate z -> z^q on a lift; one digit stabilizes per pass
    WittElement z = from_coeffs(std::vector<uint64_t>(x.coeffs()));
    uint64_t q = base_->order();
    for (unsigned pass = 0; pass <= prec_ + 1; ++pass) {
        WittElement zq = z;
        {
            WittElement acc = one();
            WittElement b = z;
            uint64_t e = q;
            while (e) {
                if (e & 1) acc = acc * b;
                b = b * b;
                e >>= 1;
            }
            zq = acc;
        }
        if (zq == z) break;
        z = zq;
    }
    {
        std::lock_guard<std::mutex> lk(teich_mutex_);
        teich_cache_.emplace(key, z.coeffs());
    }
    return z;
}

WittElement WittRing::from_digits(const std::vector<FFElement>& digits) const {
    WittElement acc = zero();
    unsigned n = std::min<unsigned>((unsigned)digits.size(), prec_);
    for (unsigned i = n; i-- > 0;) {
        // acc = acc * p + [d_i]
        acc = scale_p(acc, 1);
        acc = acc + teichmuller(digits[i]);
    }
    return acc;
}

// ---- WittElement ----

WittElement::WittElement(RingPtr ring, std::vector<uint64_t> coeffs)
    : ring_(std::move(ring)), c_(std::move(coeffs)) {
    c_.resize(ring_->degree(), 0);
}

bool WittElement::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](uint64_t x) { return x == 0; });
}

static void check_parents(const WittElement& a, const WittElement& b) {
    if (!a.ring() || !b.ring() || !a.ring()->same_as(*b.ring()))
        throw MixedParents("Witt elements from different rings (precision mixing is an error)");
}

WittElement WittElement::operator+(const WittElement& o) const {
    check_parents(*this, o);
    std::vector<uint64_t> r(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) r[i] = addm(c_[i], o.c_[i], ring_->p_pow_n());
    return WittElement(ring_, std::move(r));
}

WittElement WittElement::operator-(const WittElement& o) const {
    check_parents(*this, o);
    std::vector<uint64_t> r(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) r[i] = subm(c_[i], o.c_[i], ring_->p_pow_n());
    return WittElement(ring_, std::move(r));
}

WittElement WittElement::operator-() const {
    std::vector<uint64_t> r(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) r[i] = subm(0, c_[i], ring_->p_pow_n());
    return WittElement(ring_, std::move(r));
}

WittElement WittElement::operator*(const WittElement& o) const {
    check_parents(*this, o);
    return WittElement(ring_, ring_->poly_mul_mod(c_, o.c_));
}

bool WittElement::operator==(const WittElement& o) const {
    check_parents(*this, o);
    return c_ == o.c_;
}

WittElement WittElement::sigma(long k) const {
    unsigned a = ring_->degree();
    long e = ((k % (long)a) + (long)a) % (long)a;
    if (e == 0) return *this;
    const auto& pows = ring_->sigma_pows_[e];
    std::vector<uint64_t> out(a, 0);
    uint64_t pN = ring_->p_pow_n();
    for (unsigned j = 0; j < a; ++j) {
        if (!c_[j]) continue;
        for (unsigned t = 0; t < a; ++t)
            out[t] = (uint64_t)(((unsigned __int128)c_[j] * pows[j][t] + out[t]) % pN);
    }
    return WittElement(ring_, std::move(out));
}

unsigned WittElement::valuation() const {
    unsigned cap = ring_->precision();
    unsigned v = cap;
    for (uint64_t x : c_) v = std::min(v, val_p(x, ring_->p(), cap));
    return v;
}

WittElement WittElement::unit_part() const {
    unsigned v = valuation();
    if (v >= ring_->precision())
        throw PrecisionExhausted("unit part of a truncated zero", 0);
    uint64_t pv = 1;
    for (unsigned i = 0; i < v; ++i) pv *= ring_->p();
    std::vector<uint64_t> r(c_);
    for (auto& x : r) x /= pv;
    return WittElement(ring_, std::move(r));
}

WittElement WittElement::inverse() const {
    if (valuation() != 0) throw DivisionByZero("Witt element is not a unit");
    // lift the residue inverse by Newton iteration z <- z(2 - cz)
    WittElement z(ring_, std::vector<uint64_t>(residue().inverse().coeffs()));
    WittElement two = ring_->from_int(2);
    for (int i = 0; i < 8; ++i) {
        WittElement cz = (*this) * z;
        z = z * (two - cz);
        if (((*this) * z) == ring_->one()) break;
    }
    if ((*this) * z != ring_->one()) throw Error("unit inversion failed"); // unreachable
    return z;
}

FFElement WittElement::residue() const {
    std::vector<uint64_t> r(c_.size());
    uint64_t p = ring_->p();
    for (size_t i = 0; i < c_.size(); ++i) r[i] = c_[i] % p;
    return ring_->base()->from_coeffs(std::move(r));
}

std::vector<FFElement> WittElement::digits() const {
    unsigned N = ring_->precision();
    uint64_t p = ring_->p();
    std::vector<FFElement> out;
    out.reserve(N);
    // peel: d_i = y mod p, y <- (y - [d_i]) / p on canonical representatives;
    // digit i only needs y mod p^{N-i}, so the exact division is safe.
    std::vector<uint64_t> y(c_);
    for (unsigned i = 0; i < N; ++i) {
        std::vector<uint64_t> rc(y.size());
        for (size_t j = 0; j < y.size(); ++j) rc[j] = y[j] % p;
        FFElement d = ring_->base()->from_coeffs(rc);
        out.push_back(d);
        if (i + 1 == N) break;
        WittElement t = ring_->teichmuller(d);
        for (size_t j = 0; j < y.size(); ++j) {
            uint64_t diff = subm(y[j], t.coeffs()[j], ring_->p_pow_n());
            y[j] = diff / p;
        }
    }
    return out;
}

FFElement WittElement::digit(unsigned i) const {
    if (i >= ring_->precision()) throw PrecisionExhausted("digit index beyond precision", (int)ring_->precision());
    uint64_t p = ring_->p();
    std::vector<uint64_t> y(c_);
    for (unsigned k = 0; k < i; ++k) {
        std::vector<uint64_t> rc(y.size());
        for (size_t j = 0; j < y.size(); ++j) rc[j] = y[j] % p;
        WittElement t = ring_->teichmuller(ring_->base()->from_coeffs(rc));
        for (size_t j = 0; j < y.size(); ++j) {
            uint64_t diff = subm(y[j], t.coeffs()[j], ring_->p_pow_n());
            y[j] = diff / p;
        }
    }
    std::vector<uint64_t> rc(y.size());
    for (size_t j = 0; j < y.size(); ++j) rc[j] = y[j] % p;
    return ring_->base()->from_coeffs(rc);
}

} // namespace pdiv
