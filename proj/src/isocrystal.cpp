#include "pdiv/isocrystal.hpp"

#include <algorithm>
#include <sstream>

namespace pdiv {

namespace {

// Euclidean division of l by h: l = q*h + r with 0 <= r < h.
std::pair<long, long> divmod(long l, long h) {
    long r = l % h;
    if (r < 0) r += h;
    return {(l - r) / h, r};
}

} // namespace

IsoVector::IsoVector(ShapePtr shape, RingPtr ring)
    : shape_(std::move(shape)), ring_(std::move(ring)) {
    comps_.resize(shape_->copies().size());
    for (auto& c : comps_) c.cert = (int)ring_->precision();
}

IsoVector IsoVector::zero(ShapePtr shape, RingPtr ring) {
    return IsoVector(std::move(shape), std::move(ring));
}

IsoVector IsoVector::basis(ShapePtr shape, RingPtr ring, BasisIndex idx) {
    IsoVector v(shape, ring);
    size_t c = shape->copy_index(idx.j, idx.i);
    long h = shape->copies()[c].h;
    auto [q, r] = divmod(idx.l, h);
    Component comp;
    comp.denom = -q;
    comp.cert = (int)ring->precision();
    comp.coef.assign((size_t)h, ring->zero());
    comp.coef[(size_t)r] = ring->one();
    v.comps_[c] = std::move(comp);
    return v;
}

IsoVector IsoVector::basis(ShapePtr shape, RingPtr ring, long l) {
    if (!shape->is_simple()) throw Error("e_l shorthand requires a simple shape");
    return basis(std::move(shape), std::move(ring), BasisIndex{0, 0, l});
}

IsoVector IsoVector::from_components(ShapePtr shape, RingPtr ring,
                                     std::vector<Component> comps) {
    IsoVector v(std::move(shape), std::move(ring));
    if (comps.size() != v.comps_.size()) throw Error("component count mismatch");
    v.comps_ = std::move(comps);
    v.canonicalize();
    return v;
}

int IsoVector::cert() const {
    int c = (int)ring_->precision();
    for (const auto& comp : comps_) c = std::min(c, comp.cert);
    return c;
}

bool IsoVector::is_zero() const {
    return std::all_of(comps_.begin(), comps_.end(),
                       [](const Component& c) { return c.zero(); });
}

void IsoVector::canonicalize() {
    unsigned N = ring_->precision();
    for (size_t ci = 0; ci < comps_.size(); ++ci) {
        Component& comp = comps_[ci];
        if (comp.zero()) {
            comp.denom = 0;
            continue;
        }
        unsigned k = N;
        bool exact_zero = true;
        for (const auto& w : comp.coef) {
            if (!w.is_zero()) exact_zero = false;
            k = std::min(k, w.valuation());
        }
        if (exact_zero) {
            comp.coef.clear();
            comp.denom = 0;
            continue;
        }
        if ((int)k >= comp.cert) {
            // nonzero digits, if any, lie beyond the certified depth:
            // the component is zero at the depth we can speak about
            comp.coef.clear();
            comp.denom = 0;
            continue;
        }
        if (k > 0) {
            if (comp.cert - (int)k < 1)
                throw PrecisionExhausted("canonical form would drop below one certified digit",
                                         comp.cert - (int)k);
            uint64_t pk = 1;
            for (unsigned i = 0; i < k; ++i) pk *= ring_->p();
            for (auto& w : comp.coef) {
                std::vector<uint64_t> cc(w.coeffs());
                for (auto& x : cc) x /= pk;
                w = ring_->from_coeffs(std::move(cc));
            }
            comp.denom -= (long)k;
            comp.cert -= (int)k;
        }
    }
}

static void check_vec_parents(const IsoVector& a, const IsoVector& b) {
    if (!a.shape()->same_as(*b.shape())) throw MixedParents("vectors over different shapes");
    if (!a.ring()->same_as(*b.ring())) throw MixedParents("vectors over different rings");
}

IsoVector IsoVector::operator+(const IsoVector& o) const {
    check_vec_parents(*this, o);
    IsoVector out(shape_, ring_);
    unsigned N = ring_->precision();
    for (size_t ci = 0; ci < comps_.size(); ++ci) {
        const Component& A = comps_[ci];
        const Component& B = o.comps_[ci];
        if (A.zero() && B.zero()) {
            out.comps_[ci].cert = std::min(A.cert, B.cert);
            continue;
        }
        if (A.zero() || B.zero()) {
            const Component& src = A.zero() ? B : A;
            Component c = src;
            c.cert = std::min({A.cert, B.cert, src.cert});
            out.comps_[ci] = std::move(c);
            continue;
        }
        long d = std::max(A.denom, B.denom);
        Component c;
        c.denom = d;
        c.coef.reserve(A.coef.size());
        int certA = std::min((int)N, A.cert + (int)(d - A.denom));
        int certB = std::min((int)N, B.cert + (int)(d - B.denom));
        for (size_t r = 0; r < A.coef.size(); ++r) {
            WittElement x = ring_->scale_p(A.coef[r], (unsigned)(d - A.denom));
            WittElement y = ring_->scale_p(B.coef[r], (unsigned)(d - B.denom));
            c.coef.push_back(x + y);
        }
        c.cert = std::min(certA, certB);
        out.comps_[ci] = std::move(c);
    }
    out.canonicalize();
    return out;
}

IsoVector IsoVector::operator-() const {
    IsoVector out = *this;
    for (auto& comp : out.comps_)
        for (auto& w : comp.coef) w = -w;
    return out;
}

IsoVector IsoVector::operator-(const IsoVector& o) const { return *this + (-o); }

IsoVector IsoVector::teich_mul(const FFElement& c) const {
    if (!c.field()->same_as(*ring_->base())) throw MixedParents("scalar from another residue field");
    if (c.is_zero()) return zero(shape_, ring_);
    WittElement t = ring_->teichmuller(c);
    IsoVector out = *this;
    for (auto& comp : out.comps_)
        for (auto& w : comp.coef) w = w * t;
    return out; // [c] is a unit; canonical form is preserved
}

IsoVector IsoVector::scalar_mul(const WittElement& c) const {
    if (!c.ring()->same_as(*ring_)) throw MixedParents("scalar from another ring");
    if (c.is_zero()) return zero(shape_, ring_);
    unsigned v = c.valuation();
    WittElement u = c.unit_part();
    int ucert = (int)ring_->precision() - (int)v;
    IsoVector out = *this;
    for (auto& comp : out.comps_) {
        if (comp.zero()) continue;
        for (auto& w : comp.coef) w = w * u;
        comp.denom -= (long)v;
        comp.cert = std::min(comp.cert, ucert);
    }
    out.canonicalize();
    return out;
}

IsoVector IsoVector::scale_p(long k) const {
    IsoVector out = *this;
    for (auto& comp : out.comps_)
        if (!comp.zero()) comp.denom -= k;
    return out;
}

IsoVector IsoVector::apply_semilinear(const std::vector<long>& twist,
                                      const std::vector<long>& shift) const {
    IsoVector out(shape_, ring_);
    for (size_t ci = 0; ci < comps_.size(); ++ci) {
        const Component& A = comps_[ci];
        Component& C = out.comps_[ci];
        C.cert = A.cert;
        if (A.zero()) continue;
        size_t j = shape_->copies()[ci].j;
        long h = shape_->copies()[ci].h;
        long s = shift[j];
        long t = twist[j];
        C.denom = A.denom;
        C.coef.assign((size_t)h, ring_->zero());
        // each source lands on a distinct target; record which targets wrap
        std::vector<bool> wrapped((size_t)h, false);
        bool all_wrap = true, any = false;
        std::vector<WittElement> moved((size_t)h, ring_->zero());
        for (long r = 0; r < h; ++r) {
            const WittElement& w = A.coef[(size_t)r];
            auto [q, tr] = divmod(r + s, h);
            moved[(size_t)tr] = w.sigma(t);
            wrapped[(size_t)tr] = (q != 0);
            if (!w.is_zero()) {
                any = true;
                if (q == 0) all_wrap = false;
            }
        }
        if (any && all_wrap) {
            C.denom -= 1; // fold the common p into the denominator, exactly
            C.coef = std::move(moved);
        } else {
            for (long r = 0; r < h; ++r)
                C.coef[(size_t)r] = wrapped[(size_t)r] ? ring_->scale_p(moved[(size_t)r], 1)
                                                       : moved[(size_t)r];
        }
    }
    out.canonicalize();
    return out;
}

IsoVector IsoVector::apply_F() const {
    std::vector<long> tw(shape_->summands().size(), 1), sh;
    for (const auto& s : shape_->summands()) sh.push_back(s.m);
    return apply_semilinear(tw, sh);
}

IsoVector IsoVector::apply_V() const {
    std::vector<long> tw(shape_->summands().size(), -1), sh;
    for (const auto& s : shape_->summands()) sh.push_back(s.n);
    return apply_semilinear(tw, sh);
}

IsoVector IsoVector::apply_Vinv() const { return apply_F().scale_p(-1); }

IsoVector IsoVector::apply_pi(size_t j) const {
    if (j >= shape_->summands().size()) throw Error("no such summand");
    std::vector<long> tw(shape_->summands().size(), 0), sh(shape_->summands().size(), 0);
    tw[j] = shape_->bezout(j).second;
    sh[j] = 1;
    return apply_semilinear(tw, sh);
}

IsoVector IsoVector::apply_sigma_j(size_t j) const {
    if (j >= shape_->summands().size()) throw Error("no such summand");
    std::vector<long> tw(shape_->summands().size(), 0), sh(shape_->summands().size(), 0);
    tw[j] = shape_->summands()[j].h();
    return apply_semilinear(tw, sh);
}

std::optional<long> IsoVector::component_first_index(size_t copy) const {
    const Component& c = comps_[copy];
    if (c.zero()) return std::nullopt;
    long h = shape_->copies()[copy].h;
    long best = 0;
    bool found = false;
    for (long r = 0; r < h; ++r) {
        const WittElement& w = c.coef[(size_t)r];
        unsigned v = w.valuation();
        if ((int)v >= c.cert) continue; // not certified nonzero
        long pos = r + (long)v * h;
        if (!found || pos < best) {
            best = pos;
            found = true;
        }
    }
    if (!found) return std::nullopt; // unreachable after canonicalize
    return best - c.denom * h;
}

std::optional<BasisIndex> IsoVector::first_index() const {
    for (size_t ci = 0; ci < comps_.size(); ++ci) {
        auto l = component_first_index(ci);
        if (l) {
            const auto& cp = shape_->copies()[ci];
            return BasisIndex{cp.j, cp.i, *l};
        }
    }
    return std::nullopt;
}

FFElement IsoVector::leading_digit() const {
    for (size_t ci = 0; ci < comps_.size(); ++ci) {
        const Component& c = comps_[ci];
        if (c.zero()) continue;
        long h = shape_->copies()[ci].h;
        long best = 0, bestr = -1;
        unsigned bestv = 0;
        for (long r = 0; r < h; ++r) {
            unsigned v = c.coef[(size_t)r].valuation();
            if ((int)v >= c.cert) continue;
            long pos = r + (long)v * h;
            if (bestr < 0 || pos < best) {
                best = pos;
                bestr = r;
                bestv = v;
            }
        }
        if (bestr < 0) continue;
        return c.coef[(size_t)bestr].digit(bestv);
    }
    throw ZeroVector("leading digit of the zero vector");
}

std::map<long, FFElement> IsoVector::digit_stream(size_t j, long i) const {
    size_t ci = shape_->copy_index(j, i);
    const Component& c = comps_[ci];
    std::map<long, FFElement> out;
    if (c.zero()) return out;
    long h = shape_->copies()[ci].h;
    for (long r = 0; r < h; ++r) {
        auto ds = c.coef[(size_t)r].digits();
        for (int t = 0; t < c.cert && t < (int)ds.size(); ++t) {
            if (ds[(size_t)t].is_zero()) continue;
            out[r + ((long)t - c.denom) * h] = ds[(size_t)t];
        }
    }
    return out;
}

bool IsoVector::condition_star() const {
    unsigned a = ring_->degree();
    for (const auto& s : shape_->summands())
        if (a % (unsigned)s.h() != 0)
            throw UnsupportedResidueField("field degree " + std::to_string(a) +
                                          " not divisible by summand height " +
                                          std::to_string(s.h()));
    const auto& base = ring_->base();
    for (size_t j = 0; j < shape_->summands().size(); ++j) {
        const Summand& s = shape_->summands()[j];
        std::vector<FFElement> leads;
        for (long i = 0; i < s.mult; ++i) {
            size_t ci = shape_->copy_index(j, i);
            auto fi = component_first_index(ci);
            if (!fi) {
                leads.push_back(base->zero());
                continue;
            }
            if (*fi != 0)
                throw NotNormalized("component (" + std::to_string(j + 1) + "," +
                                    std::to_string(i + 1) + ") has minimal index " +
                                    std::to_string(*fi) + ", expected 0");
            const Component& c = comps_[ci];
            // first index 0 means denom*h is realized by a coefficient of
            // valuation denom... after canonical form, valuation 0 at r with
            // r - denom*h = 0; pick the digit there
            long h = s.h();
            long best = 0, bestr = -1;
            unsigned bestv = 0;
            for (long r = 0; r < h; ++r) {
                unsigned v = c.coef[(size_t)r].valuation();
                if ((int)v >= c.cert) continue;
                long pos = r + (long)v * h;
                if (bestr < 0 || pos < best) {
                    best = pos;
                    bestr = r;
                    bestv = v;
                }
            }
            leads.push_back(c.coef[(size_t)bestr].digit(bestv));
        }
        if (!base->subfield_linearly_independent(leads, (unsigned)s.h())) return false;
    }
    return true;
}

std::pair<bool, int> equal_with_depth(const IsoVector& a, const IsoVector& b) {
    IsoVector d = a - b;
    return {d.is_zero(), d.cert()};
}

bool IsoVector::operator==(const IsoVector& o) const {
    return equal_with_depth(*this, o).first;
}

std::string IsoVector::str() const {
    std::ostringstream os;
    bool first = true;
    for (size_t ci = 0; ci < comps_.size(); ++ci) {
        const auto& cp = shape_->copies()[ci];
        auto stream = digit_stream(cp.j, cp.i);
        for (const auto& [l, digit] : stream) {
            if (!first) os << " + ";
            first = false;
            if (!digit.is_one()) os << "[" << digit.str() << "]";
            if (shape_->is_simple())
                os << "e_" << l;
            else
                os << "e(" << cp.j + 1 << "," << cp.i + 1 << "," << l << ")";
        }
    }
    if (first) os << "0";
    return os.str();
}

IsoVector sample_vector(const ShapePtr& shape, const RingPtr& ring, Rng& rng) {
    std::vector<IsoVector::Component> comps;
    for (const auto& cp : shape->copies()) {
        IsoVector::Component c;
        c.denom = 0;
        c.cert = (int)ring->precision();
        for (long r = 0; r < cp.h; ++r) c.coef.push_back(ring->sample(rng));
        comps.push_back(std::move(c));
    }
    return IsoVector::from_components(shape, ring, std::move(comps));
}

IsoVector sample_condition_star(const ShapePtr& shape, const RingPtr& ring, Rng& rng) {
    for (int attempt = 0; attempt < 4096; ++attempt) {
        std::vector<IsoVector::Component> comps;
        for (const auto& cp : shape->copies()) {
            IsoVector::Component c;
            c.denom = 0;
            c.cert = (int)ring->precision();
            for (long r = 0; r < cp.h; ++r) c.coef.push_back(ring->sample(rng));
            // force a unit at r = 0 so the component's first index is 0
            {
                std::vector<uint64_t> cc(c.coef[0].coeffs());
                FFElement d0 = ring->base()->sample(rng);
                while (d0.is_zero()) d0 = ring->base()->sample(rng);
                WittElement lead = ring->teichmuller(d0);
                uint64_t p = ring->p();
                for (size_t t = 0; t < cc.size(); ++t)
                    cc[t] = cc[t] - cc[t] % p + lead.coeffs()[t] % p;
                c.coef[0] = ring->from_coeffs(std::move(cc));
            }
            comps.push_back(std::move(c));
        }
        IsoVector v = IsoVector::from_components(shape, ring, std::move(comps));
        if (v.condition_star()) return v;
    }
    throw IterationCap("condition-star rejection sampling failed to terminate");
}

} // namespace pdiv
