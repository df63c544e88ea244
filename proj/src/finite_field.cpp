#include "pdiv/finite_field.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace pdiv {

namespace {

using Poly = std::vector<uint64_t>; // coefficients mod p, lowest first

uint64_t addm(uint64_t a, uint64_t b, uint64_t p) { return (a + b) % p; }
uint64_t subm(uint64_t a, uint64_t b, uint64_t p) { return (a + p - b % p) % p; }
uint64_t mulm(uint64_t a, uint64_t b, uint64_t p) {
    return (uint64_t)((unsigned __int128)a * b % p);
}

uint64_t powm(uint64_t a, uint64_t e, uint64_t p) {
    uint64_t r = 1 % p;
    while (e) {
        if (e & 1) r = mulm(r, a, p);
        a = mulm(a, a, p);
        e >>= 1;
    }
    return r;
}

uint64_t invm(uint64_t a, uint64_t p) { return powm(a % p, p - 2, p); }

void trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly poly_mul(const Poly& f, const Poly& g, uint64_t p) {
    if (f.empty() || g.empty()) return {};
    Poly r(f.size() + g.size() - 1, 0);
    for (size_t i = 0; i < f.size(); ++i) {
        if (!f[i]) continue;
        for (size_t j = 0; j < g.size(); ++j)
            r[i + j] = (r[i + j] + (unsigned __int128)f[i] * g[j]) % p;
    }
    trim(r);
    return r;
}

// f mod g, g monic
Poly poly_mod(Poly f, const Poly& g, uint64_t p) {
    trim(f);
    while (f.size() >= g.size()) {
        uint64_t c = f.back();
        size_t shift = f.size() - g.size();
        if (c) {
            for (size_t i = 0; i < g.size(); ++i)
                f[shift + i] = subm(f[shift + i], mulm(c, g[i], p), p);
        }
        f.pop_back();
        trim(f);
        if (f.size() < g.size()) break;
    }
    return f;
}

Poly poly_powmod(Poly base, uint64_t e, const Poly& m, uint64_t p) {
    Poly r{1};
    base = poly_mod(std::move(base), m, p);
    while (e) {
        if (e & 1) r = poly_mod(poly_mul(r, base, p), m, p);
        base = poly_mod(poly_mul(base, base, p), m, p);
        e >>= 1;
    }
    return r;
}

Poly poly_gcd(Poly a, Poly b, uint64_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        // make b monic for the mod step
        uint64_t lc = b.back();
        if (lc != 1) {
            uint64_t il = invm(lc, p);
            for (auto& c : b) c = mulm(c, il, p);
        }
        Poly r = poly_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

// x^{p^k} mod f, computed by k successive p-th powers.
Poly frob_power_of_x(unsigned k, const Poly& f, uint64_t p) {
    Poly x{0, 1};
    Poly r = poly_mod(x, f, p);
    for (unsigned i = 0; i < k; ++i) r = poly_powmod(r, p, f, p);
    return r;
}

// Rabin irreducibility test for monic f of degree a over F_p.
bool poly_irreducible(const Poly& f, uint64_t p) {
    unsigned a = (unsigned)f.size() - 1;
    if (a == 0) return false;
    // x^{p^a} == x mod f
    Poly xpa = frob_power_of_x(a, f, p);
    Poly x = poly_mod(Poly{0, 1}, f, p);
    if (xpa != x) return false;
    // gcd(x^{p^{a/q}} - x, f) == 1 for each prime q | a
    unsigned rest = a;
    for (unsigned q = 2; q * q <= rest; ++q) {
        if (rest % q) continue;
        while (rest % q == 0) rest /= q;
        Poly g = frob_power_of_x(a / q, f, p);
        // g - x
        if (g.size() < 2) g.resize(2, 0);
        g[1] = subm(g[1], 1, p);
        trim(g);
        Poly d = poly_gcd(f, g, p);
        if (d.size() != 1) return false;
    }
    if (rest > 1) {
        Poly g = frob_power_of_x(a / rest, f, p);
        if (g.size() < 2) g.resize(2, 0);
        g[1] = subm(g[1], 1, p);
        trim(g);
        Poly d = poly_gcd(f, g, p);
        if (d.size() != 1) return false;
    }
    return true;
}

bool is_prime(uint64_t p) {
    if (p < 2) return false;
    for (uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

} // namespace

FiniteField::FiniteField(uint64_t p, unsigned a, std::vector<uint64_t> modulus)
    : p_(p), a_(a), mod_(std::move(modulus)) {
    q_ = 1;
    for (unsigned i = 0; i < a_; ++i) {
        if (q_ > UINT64_MAX / p_) throw Error("field order overflows 64 bits");
        q_ *= p_;
    }
}

FieldPtr FiniteField::make(uint64_t p, unsigned degree) {
    if (!is_prime(p)) throw Error("p = " + std::to_string(p) + " is not prime");
    if (degree == 0) throw Error("extension degree must be >= 1");
    if (degree == 1) {
        return FieldPtr(new FiniteField(p, 1, {0, 1})); // modulus x
    }
    // first irreducible monic polynomial in base-p counting order
    Poly f(degree + 1, 0);
    f[degree] = 1;
    for (;;) {
        // increment lower coefficients as a base-p counter
        size_t i = 0;
        while (i < degree) {
            f[i] = (f[i] + 1) % p;
            if (f[i] != 0) break;
            ++i;
        }
        if (i == degree) throw Error("no irreducible polynomial found"); // unreachable
        if (poly_irreducible(f, p)) return FieldPtr(new FiniteField(p, degree, f));
    }
}

FieldPtr FiniteField::make(uint64_t p, std::vector<uint64_t> modulus) {
    if (!is_prime(p)) throw Error("p = " + std::to_string(p) + " is not prime");
    for (auto& c : modulus) c %= p;
    trim(modulus);
    if (modulus.size() < 2) throw Error("modulus must have degree >= 1");
    if (modulus.back() != 1) throw Error("modulus must be monic");
    unsigned a = (unsigned)modulus.size() - 1;
    if (a > 1 && !poly_irreducible(modulus, p)) throw Error("modulus is reducible");
    return FieldPtr(new FiniteField(p, a, std::move(modulus)));
}

bool FiniteField::same_as(const FiniteField& o) const {
    return p_ == o.p_ && a_ == o.a_ && mod_ == o.mod_;
}

FFElement FiniteField::zero() const { return from_coeffs({}); }
FFElement FiniteField::one() const { return from_coeffs({1}); }
FFElement FiniteField::gen() const {
    if (a_ == 1) throw Error("prime field has no generator element x");
    return from_coeffs({0, 1});
}

FFElement FiniteField::from_coeffs(std::vector<uint64_t> coeffs) const {
    for (auto& c : coeffs) c %= p_;
    coeffs = poly_mod(std::move(coeffs), mod_, p_);
    coeffs.resize(a_, 0);
    return FFElement(shared_from_this(), std::move(coeffs));
}

FFElement FiniteField::from_int(uint64_t n) const { return from_coeffs({n % p_}); }

FFElement FiniteField::sample(Rng& rng) const {
    std::vector<uint64_t> c(a_);
    for (auto& x : c) x = rng.below(p_);
    return FFElement(shared_from_this(), std::move(c));
}

std::vector<FFElement> FiniteField::elements() const {
    std::vector<FFElement> out;
    out.reserve(q_);
    std::vector<uint64_t> c(a_, 0);
    for (;;) {
        out.push_back(FFElement(shared_from_this(), c));
        size_t i = 0;
        while (i < a_) {
            c[i] = (c[i] + 1) % p_;
            if (c[i] != 0) break;
            ++i;
        }
        if (i == a_) break;
    }
    return out;
}

std::vector<FFElement> FiniteField::subfield_basis(unsigned d) const {
    if (d == 0 || a_ % d != 0)
        throw UnsupportedResidueField("subfield degree " + std::to_string(d) +
                                      " does not divide " + std::to_string(a_));
    // kernel of (Frobenius^d - id) as an F_p-linear map on F_p^a
    std::vector<std::vector<uint64_t>> cols(a_);
    for (unsigned j = 0; j < a_; ++j) {
        std::vector<uint64_t> ej(a_, 0);
        ej[j] = 1;
        FFElement e = from_coeffs(ej);
        FFElement fr = e.frobenius((long)d);
        cols[j] = fr.coeffs();
        cols[j][j] = subm(cols[j][j], 1, p_);
    }
    // Gaussian elimination to find the kernel. Matrix rows = a_, columns = a_.
    std::vector<std::vector<uint64_t>> m(a_, std::vector<uint64_t>(a_));
    for (unsigned r = 0; r < a_; ++r)
        for (unsigned cidx = 0; cidx < a_; ++cidx) m[r][cidx] = cols[cidx][r];
    std::vector<long> pivot_col_of_row(a_, -1);
    unsigned rank = 0;
    for (unsigned col = 0; col < a_ && rank < a_; ++col) {
        unsigned sel = rank;
        while (sel < a_ && m[sel][col] == 0) ++sel;
        if (sel == a_) continue;
        std::swap(m[sel], m[rank]);
        uint64_t inv = invm(m[rank][col], p_);
        for (auto& x : m[rank]) x = mulm(x, inv, p_);
        for (unsigned r = 0; r < a_; ++r) {
            if (r == rank || m[r][col] == 0) continue;
            uint64_t f = m[r][col];
            for (unsigned cidx = 0; cidx < a_; ++cidx)
                m[r][cidx] = subm(m[r][cidx], mulm(f, m[rank][cidx], p_), p_);
        }
        pivot_col_of_row[rank] = col;
        ++rank;
    }
    std::vector<bool> is_pivot(a_, false);
    for (unsigned r = 0; r < rank; ++r) is_pivot[pivot_col_of_row[r]] = true;
    std::vector<FFElement> basis;
    for (unsigned freecol = 0; freecol < a_; ++freecol) {
        if (is_pivot[freecol]) continue;
        std::vector<uint64_t> v(a_, 0);
        v[freecol] = 1;
        for (unsigned r = 0; r < rank; ++r)
            v[pivot_col_of_row[r]] = subm(0, m[r][freecol], p_);
        basis.push_back(from_coeffs(v));
    }
    if (basis.size() != d)
        throw Error("subfield basis has unexpected dimension"); // unreachable
    return basis;
}

bool FiniteField::subfield_linearly_independent(const std::vector<FFElement>& elems,
                                                unsigned d) const {
    std::vector<FFElement> sub = subfield_basis(d); // validates d | a
    size_t k = elems.size();
    if (k == 0) return true;
    if (k * d > a_) return false;
    // rows: beta_t * v_i as F_p-vectors; independent over F_{p^d} iff rank == k*d
    std::vector<std::vector<uint64_t>> rows;
    rows.reserve(k * d);
    for (const auto& v : elems) {
        if (!v.field()->same_as(*this)) throw MixedParents("element from another field");
        for (const auto& b : sub) rows.push_back((b * v).coeffs());
    }
    unsigned rank = 0;
    for (unsigned col = 0; col < a_ && rank < rows.size(); ++col) {
        size_t sel = rank;
        while (sel < rows.size() && rows[sel][col] == 0) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[sel], rows[rank]);
        uint64_t inv = invm(rows[rank][col], p_);
        for (auto& x : rows[rank]) x = mulm(x, inv, p_);
        for (size_t r = rank + 1; r < rows.size(); ++r) {
            if (rows[r][col] == 0) continue;
            uint64_t f = rows[r][col];
            for (unsigned c = 0; c < a_; ++c)
                rows[r][c] = subm(rows[r][c], mulm(f, rows[rank][c], p_), p_);
        }
        ++rank;
    }
    return rank == k * d;
}

// ---- FFElement ----

FFElement::FFElement(FieldPtr field, std::vector<uint64_t> coeffs)
    : field_(std::move(field)), c_(std::move(coeffs)) {
    c_.resize(field_->degree(), 0);
}

bool FFElement::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](uint64_t x) { return x == 0; });
}

bool FFElement::is_one() const {
    if (c_.empty() || c_[0] != 1) return false;
    return std::all_of(c_.begin() + 1, c_.end(), [](uint64_t x) { return x == 0; });
}

static void check_parents(const FFElement& a, const FFElement& b) {
    if (!a.field() || !b.field() || !a.field()->same_as(*b.field()))
        throw MixedParents("field elements from different fields");
}

FFElement FFElement::operator+(const FFElement& o) const {
    check_parents(*this, o);
    std::vector<uint64_t> r(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) r[i] = addm(c_[i], o.c_[i], field_->p());
    return FFElement(field_, std::move(r));
}

FFElement FFElement::operator-(const FFElement& o) const {
    check_parents(*this, o);
    std::vector<uint64_t> r(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) r[i] = subm(c_[i], o.c_[i], field_->p());
    return FFElement(field_, std::move(r));
}

FFElement FFElement::operator-() const {
    std::vector<uint64_t> r(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) r[i] = subm(0, c_[i], field_->p());
    return FFElement(field_, std::move(r));
}

FFElement FFElement::operator*(const FFElement& o) const {
    check_parents(*this, o);
    Poly prod = poly_mul(c_, o.c_, field_->p());
    prod = poly_mod(std::move(prod), field_->mod_, field_->p());
    prod.resize(field_->degree(), 0);
    return FFElement(field_, std::move(prod));
}

bool FFElement::operator==(const FFElement& o) const {
    check_parents(*this, o);
    return c_ == o.c_;
}

FFElement FFElement::pow(uint64_t e) const {
    Poly r = poly_powmod(c_, e, field_->mod_, field_->p());
    r.resize(field_->degree(), 0);
    return FFElement(field_, std::move(r));
}

FFElement FFElement::inverse() const {
    if (is_zero()) throw DivisionByZero("inverse of zero field element");
    return pow(field_->order() - 2);
}

FFElement FFElement::frobenius(long k) const {
    long a = (long)field_->degree();
    long e = ((k % a) + a) % a;
    FFElement r = *this;
    for (long i = 0; i < e; ++i) r = r.pow(field_->p());
    return r;
}

uint64_t FFElement::pack() const {
    uint64_t p = field_->p();
    uint64_t key = 0;
    for (size_t i = c_.size(); i-- > 0;) {
        if (key > (UINT64_MAX - c_[i]) / p) throw Error("field too large to pack");
        key = key * p + c_[i];
    }
    return key;
}

std::string FFElement::str() const {
    std::ostringstream os;
    bool first = true;
    for (size_t i = c_.size(); i-- > 0;) {
        if (!c_[i]) continue;
        if (!first) os << "+";
        first = false;
        if (i == 0) {
            os << c_[i];
        } else {
            if (c_[i] != 1) os << c_[i] << "*";
            os << "x";
            if (i > 1) os << "^" << i;
        }
    }
    if (first) os << "0";
    return os.str();
}

} // namespace pdiv
