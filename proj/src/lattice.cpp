#include "pdiv/lattice.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace pdiv {

namespace {

std::pair<long, long> divmod(long l, long h) {
    long r = l % h;
    if (r < 0) r += h;
    return {(l - r) / h, r};
}

// exact division of the representative by p^k; caller guarantees divisibility
WittElement div_p_exact(const WittElement& x, unsigned k) {
    if (k == 0) return x;
    uint64_t pk = 1;
    for (unsigned i = 0; i < k; ++i) pk *= x.ring()->p();
    std::vector<uint64_t> c(x.coeffs());
    for (auto& v : c) v /= pk;
    return x.ring()->from_coeffs(std::move(c));
}

} // namespace

// ---- DieudonneLattice ----

DieudonneLattice::DieudonneLattice(ShapePtr shape, RingPtr ring, std::vector<IsoVector> basis)
    : shape_(std::move(shape)), ring_(std::move(ring)), basis_(std::move(basis)) {}

int DieudonneLattice::certified_precision() const {
    int c = (int)ring_->precision();
    for (const auto& b : basis_) c = std::min(c, b.cert());
    return c;
}

// ---- LatticeBuilder ----

LatticeBuilder::LatticeBuilder(ShapePtr shape, RingPtr ring)
    : shape_(std::move(shape)), ring_(std::move(ring)) {}

IsoVector LatticeBuilder::normalize_leading(IsoVector v) const {
    auto fi = v.first_index();
    if (!fi) return v;
    size_t copy = shape_->copy_index(fi->j, fi->i);
    long h = shape_->copies()[copy].h;
    const auto& comp = v.component(copy);
    long r = divmod(fi->l, h).second;
    const WittElement& lead = comp.coef[(size_t)r];
    WittElement u = lead.unit_part();
    if (u == ring_->one()) return v;
    return v.scalar_mul(u.inverse());
}

bool LatticeBuilder::insert(IsoVector v) {
    bool grew = false;
    long guard = 16 * (long)ring_->precision() * shape_->height() + 64;
    while (guard-- > 0) {
        if (v.is_zero()) return grew;
        auto fi = *v.first_index();
        size_t copy = shape_->copy_index(fi.j, fi.i);
        long h = shape_->copies()[copy].h;
        PivotKey key{copy, divmod(fi.l, h).second};
        auto it = pivots_.find(key);
        if (it == pivots_.end()) {
            pivots_.emplace(key, normalize_leading(std::move(v)));
            return true;
        }
        IsoVector& b = it->second;
        long lb = b.first_index()->l;
        if (fi.l < lb) {
            IsoVector old = b;
            it->second = normalize_leading(std::move(v));
            v = std::move(old);
            grew = true;
            continue;
        }
        long k = (fi.l - lb) / h;
        FFElement lam = v.leading_digit();
        v = v - b.scale_p(k).teich_mul(lam);
    }
    throw IterationCap("column reduction failed to terminate");
}

IsoVector LatticeBuilder::reduce(IsoVector v, std::map<PivotKey, WittElement>* trail) const {
    long guard = 16 * (long)ring_->precision() * shape_->height() + 64;
    while (guard-- > 0) {
        if (v.is_zero()) return v;
        auto fi = *v.first_index();
        size_t copy = shape_->copy_index(fi.j, fi.i);
        long h = shape_->copies()[copy].h;
        PivotKey key{copy, divmod(fi.l, h).second};
        auto it = pivots_.find(key);
        if (it == pivots_.end()) return v;
        const IsoVector& b = it->second;
        long lb = b.first_index()->l;
        if (fi.l < lb) return v;
        long k = (fi.l - lb) / h;
        FFElement lam = v.leading_digit();
        if (trail) {
            WittElement c = ring_->scale_p(ring_->teichmuller(lam), (unsigned)k);
            auto [pos, fresh] = trail->emplace(key, c);
            if (!fresh) pos->second = pos->second + c;
        }
        v = v - b.scale_p(k).teich_mul(lam);
    }
    throw IterationCap("column reduction failed to terminate");
}

void LatticeBuilder::hermite() {
    for (auto& [key, P] : pivots_) {
        long guard = 64 * (long)ring_->precision() * shape_->height() + 64;
        for (;;) {
            if (guard-- <= 0) throw IterationCap("cross-reduction failed to terminate");
            // lexicographically smallest digit of P clearable by another pivot
            bool found = false;
            BasisIndex best{};
            FFElement digit;
            const IsoVector* which = nullptr;
            long kk = 0;
            for (const auto& [key2, Q] : pivots_) {
                if (key2 == key) continue;
                const auto& cp = shape_->copies()[key2.copy];
                long lq = Q.first_index()->l;
                auto stream = P.digit_stream(cp.j, cp.i);
                for (const auto& [pos, d] : stream) {
                    if (pos < lq) continue;
                    if (divmod(pos, cp.h).second != key2.r) continue;
                    BasisIndex cand{cp.j, cp.i, pos};
                    if (!found || cand < best) {
                        found = true;
                        best = cand;
                        digit = d;
                        which = &Q;
                        kk = (pos - lq) / cp.h;
                    }
                    break; // stream is ordered; first hit in this class is the least
                }
            }
            if (!found) break;
            P = P - which->scale_p(kk).teich_mul(digit);
        }
    }
}

std::vector<IsoVector> LatticeBuilder::sorted_basis() const {
    std::vector<IsoVector> out;
    out.reserve(pivots_.size());
    for (const auto& [k, v] : pivots_) out.push_back(v);
    std::sort(out.begin(), out.end(), [](const IsoVector& a, const IsoVector& b) {
        return *a.first_index() < *b.first_index();
    });
    return out;
}

DieudonneLattice LatticeBuilder::to_lattice() {
    hermite();
    return DieudonneLattice(shape_, ring_, sorted_basis());
}

// ---- span and friends ----

DieudonneLattice span(ShapePtr shape, RingPtr ring, const std::vector<IsoVector>& vectors) {
    LatticeBuilder b(shape, ring);
    for (const auto& v : vectors) {
        if (v.is_zero()) throw ZeroVector("span of a zero vector");
        b.insert(v);
    }
    return b.to_lattice();
}

DieudonneLattice minimal_lattice(ShapePtr shape, RingPtr ring) {
    std::vector<IsoVector> gens;
    for (const auto& cp : shape->copies())
        for (long r = 0; r < cp.h; ++r)
            gens.push_back(IsoVector::basis(shape, ring, BasisIndex{cp.j, cp.i, r}));
    return span(shape, ring, gens);
}

bool lattice_equal(const DieudonneLattice& a, const DieudonneLattice& b) {
    if (!a.shape()->same_as(*b.shape()) || !a.ring()->same_as(*b.ring()))
        throw MixedParents("lattices over different shapes or rings");
    if (a.rank() != b.rank()) return false;
    for (size_t i = 0; i < a.rank(); ++i)
        if (a.basis()[i] != b.basis()[i]) return false;
    return true;
}

bool lattice_contains(const DieudonneLattice& L, const IsoVector& v) {
    LatticeBuilder b(L.shape(), L.ring());
    for (const auto& x : L.basis()) b.insert(x);
    return b.reduce(v).is_zero();
}

DieudonneLattice scale_lattice(const DieudonneLattice& L, long k) {
    std::vector<IsoVector> scaled;
    for (const auto& b : L.basis()) scaled.push_back(b.scale_p(k));
    return span(L.shape(), L.ring(), scaled);
}

bool is_dieudonne(const DieudonneLattice& L) {
    LatticeBuilder b(L.shape(), L.ring());
    for (const auto& x : L.basis()) b.insert(x);
    for (const auto& x : L.basis()) {
        if (!b.reduce(x.apply_F()).is_zero()) return false;
        if (!b.reduce(x.apply_V()).is_zero()) return false;
    }
    return true;
}

long default_iteration_cap(const IsocrystalShape& shape, const WittRing& ring) {
    return 4 * shape.height() * (long)ring.precision();
}

namespace {

// worklist closure of the span of `start` under the maps in `ops`
DieudonneLattice closure_under(ShapePtr shape, RingPtr ring, std::vector<IsoVector> start,
                               const std::vector<std::function<IsoVector(const IsoVector&)>>& ops,
                               long cap) {
    LatticeBuilder b(shape, ring);
    for (auto& v : start) {
        if (v.is_zero()) throw ZeroVector("closure of a zero vector");
        b.insert(std::move(v));
    }
    for (long pass = 0; pass < cap; ++pass) {
        bool changed = false;
        std::vector<IsoVector> snapshot = b.sorted_basis();
        for (const auto& x : snapshot)
            for (const auto& op : ops)
                changed = b.insert(op(x)) || changed;
        if (!changed) return b.to_lattice();
    }
    throw IterationCap("closure worklist did not stabilize within the cap");
}

} // namespace

DieudonneLattice dieudonne_closure(const IsoVector& v, long cap) {
    auto shape = v.shape();
    auto ring = v.ring();
    if (cap <= 0) cap = default_iteration_cap(*shape, *ring);
    std::vector<std::function<IsoVector(const IsoVector&)>> ops = {
        [](const IsoVector& x) { return x.apply_F(); },
        [](const IsoVector& x) { return x.apply_V(); },
    };
    return closure_under(shape, ring, {v}, ops, cap);
}

DieudonneLattice p_closure(const DieudonneLattice& L, long cap) {
    auto shape = L.shape();
    auto ring = L.ring();
    if (cap <= 0) cap = default_iteration_cap(*shape, *ring);
    std::vector<std::function<IsoVector(const IsoVector&)>> ops = {
        [](const IsoVector& x) { return x.apply_F(); },
        [](const IsoVector& x) { return x.apply_V(); },
    };
    for (size_t j = 0; j < shape->summands().size(); ++j) {
        ops.push_back([j](const IsoVector& x) { return x.apply_pi(j); });
        ops.push_back([j](const IsoVector& x) { return x.apply_sigma_j(j); });
    }
    return closure_under(shape, ring, L.basis(), ops, cap);
}

// ---- vol ----

long vol(const DieudonneLattice& L) {
    const auto& shape = *L.shape();
    const auto& ring = L.ring();
    long h = shape.height();
    if ((long)L.rank() != h) throw Error("vol requires a full-rank lattice");
    // row offsets per copy
    std::vector<long> offset(shape.copies().size() + 1, 0);
    for (size_t c = 0; c < shape.copies().size(); ++c)
        offset[c + 1] = offset[c] + shape.copies()[c].h;
    // columns scaled integral by p^{D_v}
    std::vector<std::vector<WittElement>> M((size_t)h,
                                            std::vector<WittElement>((size_t)h, ring->zero()));
    long denom_total = 0;
    int avail = L.certified_precision();
    for (size_t col = 0; col < (size_t)h; ++col) {
        const IsoVector& v = L.basis()[col];
        long D = 0;
        bool nonzero = false;
        for (size_t c = 0; c < shape.copies().size(); ++c) {
            const auto& comp = v.component(c);
            if (comp.zero()) continue;
            nonzero = true;
            D = std::max(D, comp.denom);
        }
        if (!nonzero) throw Error("zero basis vector");
        denom_total += D;
        for (size_t c = 0; c < shape.copies().size(); ++c) {
            const auto& comp = v.component(c);
            if (comp.zero()) continue;
            for (long r = 0; r < shape.copies()[c].h; ++r) {
                WittElement e = comp.coef[(size_t)r];
                M[(size_t)(offset[c] + r)][col] = ring->scale_p(e, (unsigned)(D - comp.denom));
            }
        }
    }
    // valuation-pivot elimination; det valuation = sum of pivot valuations
    std::vector<char> rowUsed((size_t)h, 0), colUsed((size_t)h, 0);
    long total = 0;
    for (long step = 0; step < h; ++step) {
        unsigned bestv = ring->precision() + 1;
        size_t bi = 0, bj = 0;
        for (size_t i = 0; i < (size_t)h; ++i) {
            if (rowUsed[i]) continue;
            for (size_t j = 0; j < (size_t)h; ++j) {
                if (colUsed[j]) continue;
                unsigned v = M[i][j].valuation();
                if (v < bestv) {
                    bestv = v;
                    bi = i;
                    bj = j;
                }
            }
        }
        if ((int)bestv >= avail)
            throw PrecisionExhausted("vol pivot valuation reaches the certified depth", avail);
        total += (long)bestv;
        avail -= (int)bestv;
        WittElement pivotInv = M[bi][bj].unit_part().inverse();
        for (size_t j = 0; j < (size_t)h; ++j) {
            if (colUsed[j] || j == bj) continue;
            const WittElement& e = M[bi][j];
            if (e.is_zero()) continue;
            WittElement t = e * pivotInv;        // p^{v_e} * unit
            WittElement factor = div_p_exact(t, bestv);
            for (size_t i = 0; i < (size_t)h; ++i) {
                if (rowUsed[i]) continue;
                M[i][j] = M[i][j] - factor * M[i][bj];
            }
        }
        rowUsed[bi] = 1;
        colUsed[bj] = 1;
    }
    return total - denom_total;
}

long a_invariant(const DieudonneLattice& L) {
    std::vector<IsoVector> images;
    for (const auto& b : L.basis()) {
        images.push_back(b.apply_F());
        images.push_back(b.apply_V());
    }
    DieudonneLattice S = span(L.shape(), L.ring(), images);
    if (S.rank() != L.rank()) throw Error("FL + VL dropped rank");
    return vol(S) - vol(L);
}

// ---- semimodules of lattices ----

SemiModule semimodule_of(const DieudonneLattice& L) {
    const auto& shape = *L.shape();
    if (!shape.is_simple()) throw Error("semimodule_of requires a simple shape");
    if (!L.full_rank()) throw Error("semimodule_of requires a full-rank lattice");
    SemiModule A{shape.copies()[0].m, shape.copies()[0].n, {}};
    for (const auto& b : L.basis()) A.fringe.push_back(b.first_index()->l);
    std::sort(A.fringe.begin(), A.fringe.end());
    A.validate();
    return A;
}

long vol_from_semimodule(const DieudonneLattice& L) {
    SemiModule A = semimodule_of(L);
    return A.missing_naturals() - A.negatives();
}

// ---- index set ----

namespace {

bool in_semigroup(long x, long m, long n) {
    if (x < 0) return false;
    for (long b = 0; b * n <= x; ++b)
        if ((x - b * n) % m == 0) return true;
    return false;
}

} // namespace

IndexSet index_set(const IsocrystalShape& shape) {
    if (!shape.is_bi_infinitesimal())
        throw Error("index set is defined for bi-infinitesimal shapes");
    IndexSet I;
    const auto& copies = shape.copies();
    long mprefix = 0;
    for (size_t c = 0; c < copies.size(); ++c) {
        long m = copies[c].m, n = copies[c].n;
        long off = n * mprefix;
        long bound = off + m * n; // Frobenius number of <m,n> is below m*n
        for (long l = 0; l <= bound; ++l)
            if (!in_semigroup(l - off, m, n)) I.members.emplace_back(c, l);
        mprefix += m;
    }
    I.c = c_constant(shape);
    if ((long)I.members.size() != I.c)
        throw Error("index set size disagrees with the volume constant"); // consistency check
    for (const auto& [c, l] : I.members) {
        if (c == 0 && l == 0) throw Error("(1,1,0) must not lie in the index set");
    }
    for (size_t c = 1; c < copies.size(); ++c) {
        if (!std::count(I.members.begin(), I.members.end(), std::make_pair(c, 0L)))
            throw Error("(j,i,0) must lie in the index set for (j,i) != (1,1)");
    }
    std::sort(I.members.begin(), I.members.end());
    return I;
}

long c_constant(const IsocrystalShape& shape) {
    Rational c = dim_formula(shape);
    if (c.denominator() != 1) throw Error("volume constant must be integral");
    return (long)c.numerator();
}

unsigned default_precision(const IsocrystalShape& shape) {
    return (unsigned)(c_constant(shape) + 2 * shape.height() + 4);
}

// ---- paving points ----

DieudonneLattice lattice_from_cycle_point(
    ShapePtr shape, RingPtr ring, const SemiModule& A,
    const std::map<std::pair<size_t, size_t>, FFElement>& coords, long cap) {
    if (!shape->is_simple()) throw Error("cycle points require a simple shape");
    long m = shape->copies()[0].m, n = shape->copies()[0].n, h = m + n;
    if (A.m != m || A.n != n) throw MixedParents("semimodule does not match the shape");
    if (!A.is_normalized()) throw NotASemimodule("cycle point requires a normalized semimodule");
    Cycle B = cycle_from_semimodule(A);
    auto vb = B.vb_pairs();
    {
        std::set<std::pair<size_t, size_t>> want(vb.begin(), vb.end());
        std::set<std::pair<size_t, size_t>> got;
        for (const auto& [k, val] : coords) {
            got.insert(k);
            if (!val.field()->same_as(*ring->base()))
                throw MixedParents("coordinate from another field");
        }
        if (want != got)
            throw BadCoordinateIndex("coordinates must be indexed exactly by V(B), expected " +
                                     std::to_string(want.size()) + " entries");
    }
    std::set<long> bset(B.values.begin(), B.values.end());
    std::vector<bool> plus((size_t)h, false);
    for (size_t i = 0; i < (size_t)h; ++i) {
        bool up = bset.count(B.values[i] + m), down = bset.count(B.values[i] - n);
        if (up == down) throw NotASemimodule("cycle fails the B+/B- dichotomy");
        plus[i] = up;
    }
    // corrections entering step i+1, grouped by target
    std::vector<std::vector<std::pair<size_t, FFElement>>> corr((size_t)h);
    for (const auto& [d, i] : vb) corr[i].push_back({d, coords.at({d, i})});

    std::vector<IsoVector> vs;
    for (long i = 0; i < h; ++i) vs.push_back(IsoVector::basis(shape, ring, B.values[(size_t)i]));
    if (cap <= 0) cap = default_iteration_cap(*shape, *ring);
    bool stable = false;
    for (long pass = 0; pass < cap && !stable; ++pass) {
        stable = true;
        for (size_t i = 0; i + 1 < (size_t)h; ++i) {
            IsoVector w = plus[i] ? vs[i].apply_F() : vs[i].apply_Vinv();
            if (!plus[i + 1])
                for (const auto& [d, a] : corr[i + 1]) w = w + vs[d].teich_mul(a);
            if (w != vs[i + 1]) {
                vs[i + 1] = std::move(w);
                stable = false;
            }
        }
    }
    if (!stable) throw IterationCap("paving recursion did not converge");
    return span(shape, ring, vs);
}

} // namespace pdiv
