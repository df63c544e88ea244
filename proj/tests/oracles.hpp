// Test-only reference implementations, kept independent of the library's
// fast paths: elementary-divisor lengths by full diagonalization, exhaustive
// subfield-combination checks, and the mod-p quotient route to the
// a-invariant.
#pragma once

#include "pdiv/lattice.hpp"

namespace pdiv::oracle {

/// Elementary divisor exponents of the matrix expressing basis(L) in the
/// basis of M0, by valuation-pivot diagonalization with both row and column
/// operations. Requires L inside M0 (no denominators).
inline std::vector<long> smith_exponents(const DieudonneLattice& L) {
    const auto& shape = *L.shape();
    const auto& ring = L.ring();
    long h = shape.height();
    if ((long)L.rank() != h) throw Error("oracle needs a full-rank lattice");
    std::vector<long> offset(shape.copies().size() + 1, 0);
    for (size_t c = 0; c < shape.copies().size(); ++c)
        offset[c + 1] = offset[c] + shape.copies()[c].h;
    std::vector<std::vector<WittElement>> M((size_t)h,
                                            std::vector<WittElement>((size_t)h, ring->zero()));
    for (size_t col = 0; col < (size_t)h; ++col) {
        const IsoVector& v = L.basis()[col];
        for (size_t c = 0; c < shape.copies().size(); ++c) {
            const auto& comp = v.component(c);
            if (comp.zero()) continue;
            if (comp.denom > 0) throw Error("oracle needs a sublattice of M0");
            for (long r = 0; r < shape.copies()[c].h; ++r)
                M[(size_t)(offset[c] + r)][col] =
                    ring->scale_p(comp.coef[(size_t)r], (unsigned)(-comp.denom));
        }
    }
    auto div_p = [&](const WittElement& x, unsigned k) {
        uint64_t pk = 1;
        for (unsigned i = 0; i < k; ++i) pk *= ring->p();
        std::vector<uint64_t> c(x.coeffs());
        for (auto& val : c) val /= pk;
        return ring->from_coeffs(std::move(c));
    };
    std::vector<char> rowDone((size_t)h, 0), colDone((size_t)h, 0);
    std::vector<long> exps;
    for (long step = 0; step < h; ++step) {
        unsigned bestv = ring->precision() + 1;
        size_t bi = 0, bj = 0;
        for (size_t i = 0; i < (size_t)h; ++i) {
            if (rowDone[i]) continue;
            for (size_t j = 0; j < (size_t)h; ++j) {
                if (colDone[j]) continue;
                unsigned v = M[i][j].valuation();
                if (v < bestv) {
                    bestv = v;
                    bi = i;
                    bj = j;
                }
            }
        }
        if (bestv > ring->precision())
            throw PrecisionExhausted("oracle matrix is singular at this precision", 0);
        WittElement pinv = M[bi][bj].unit_part().inverse();
        // clear the pivot row by column operations
        for (size_t j = 0; j < (size_t)h; ++j) {
            if (colDone[j] || j == bj || M[bi][j].is_zero()) continue;
            WittElement f = div_p(M[bi][j] * pinv, bestv);
            for (size_t i = 0; i < (size_t)h; ++i) {
                if (rowDone[i]) continue;
                M[i][j] = M[i][j] - f * M[i][bj];
            }
        }
        // clear the pivot column by row operations
        for (size_t i = 0; i < (size_t)h; ++i) {
            if (rowDone[i] || i == bi || M[i][bj].is_zero()) continue;
            WittElement f = div_p(M[i][bj] * pinv, bestv);
            for (size_t j = 0; j < (size_t)h; ++j) {
                if (colDone[j]) continue;
                M[i][j] = M[i][j] - f * M[bi][j];
            }
        }
        exps.push_back((long)bestv);
        rowDone[bi] = 1;
        colDone[bj] = 1;
    }
    std::sort(exps.begin(), exps.end());
    return exps;
}

/// lg(M0 / L) for L inside M0, per the definition of vol as a quotient
/// length.
inline long smith_length_in_M0(const DieudonneLattice& L) {
    long total = 0;
    for (long e : smith_exponents(L)) total += e;
    return total;
}

/// Literal condition-(*) test: enumerate every F_{p^d}-linear combination.
/// Only for small fields.
inline bool subfield_independent_exhaustive(const FieldPtr& field,
                                            const std::vector<FFElement>& elems, unsigned d) {
    std::vector<FFElement> sub;
    for (const auto& z : field->elements())
        if (z.frobenius((long)d) == z) sub.push_back(z);
    size_t k = elems.size();
    std::vector<size_t> idx(k, 0);
    for (;;) {
        bool nontrivial = false;
        FFElement acc = field->zero();
        for (size_t i = 0; i < k; ++i) {
            if (!sub[idx[i]].is_zero()) nontrivial = true;
            acc = acc + sub[idx[i]] * elems[i];
        }
        if (nontrivial && acc.is_zero()) return false;
        size_t i = 0;
        while (i < k) {
            idx[i] = (idx[i] + 1) % sub.size();
            if (idx[i] != 0) break;
            ++i;
        }
        if (i == k) break;
    }
    return true;
}

/// a(M) = dim_K M/(FM+VM) by the direct quotient route: coordinates of the
/// generators of FM+VM with respect to the basis, reduced mod p, and a rank
/// computation over the residue field.
inline long a_invariant_modp(const DieudonneLattice& L) {
    LatticeBuilder b(L.shape(), L.ring());
    for (const auto& x : L.basis()) b.insert(x);
    // coordinate columns: the pivot class of each basis vector
    std::vector<LatticeBuilder::PivotKey> keys;
    for (const auto& x : L.basis()) {
        auto fi = *x.first_index();
        size_t copy = L.shape()->copy_index(fi.j, fi.i);
        long hc = L.shape()->copies()[copy].h;
        keys.push_back({copy, ((fi.l % hc) + hc) % hc});
    }
    std::sort(keys.begin(), keys.end());
    const auto& field = L.ring()->base();
    std::vector<std::vector<FFElement>> rows;
    for (const auto& x : L.basis()) {
        for (const IsoVector& img : {x.apply_F(), x.apply_V()}) {
            std::map<LatticeBuilder::PivotKey, WittElement> trail;
            IsoVector rem = b.reduce(img, &trail);
            if (!rem.is_zero()) throw Error("image does not lie in the lattice");
            std::vector<FFElement> row;
            for (const auto& k : keys) {
                auto it = trail.find(k);
                row.push_back(it == trail.end() ? field->zero() : it->second.residue());
            }
            rows.push_back(std::move(row));
        }
    }
    // rank over the residue field
    size_t cols = keys.size(), rank = 0;
    for (size_t col = 0; col < cols && rank < rows.size(); ++col) {
        size_t sel = rank;
        while (sel < rows.size() && rows[sel][col].is_zero()) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[sel], rows[rank]);
        FFElement inv = rows[rank][col].inverse();
        for (auto& e : rows[rank]) e = e * inv;
        for (size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r][col].is_zero()) continue;
            FFElement f = rows[r][col];
            for (size_t c2 = 0; c2 < cols; ++c2)
                rows[r][c2] = rows[r][c2] - f * rows[rank][c2];
        }
        ++rank;
    }
    return (long)cols - (long)rank;
}

} // namespace pdiv::oracle
