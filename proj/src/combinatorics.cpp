#include "pdiv/combinatorics.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace pdiv {

namespace {

std::pair<long, long> divmod(long l, long h) {
    long r = l % h;
    if (r < 0) r += h;
    return {(l - r) / h, r};
}

std::tuple<long, long, long> ext_gcd(long a, long b) {
    if (b == 0) return {a, 1, 0};
    auto [g, x, y] = ext_gcd(b, a % b);
    return {g, y, x - (a / b) * y};
}

void require_coprime(long m, long n) {
    if (m < 1 || n < 1 || std::gcd(m, n) != 1)
        throw NonCoprime("(m, n) = (" + std::to_string(m) + ", " + std::to_string(n) +
                         ") must be coprime positive integers");
}

} // namespace

// ---- SemiModule ----

bool SemiModule::member(long x) const {
    long hh = h();
    for (long b : fringe)
        if ((x - b) % hh == 0) return x >= b;
    throw NotASemimodule("fringe misses a residue class");
}

long SemiModule::missing_naturals() const {
    // naturals of class r below the fringe value b are floor(b/h) when b >= 0
    long hh = h(), cnt = 0;
    for (long b : fringe)
        if (b >= 0) cnt += b / hh;
    return cnt;
}

long SemiModule::negatives() const {
    long hh = h(), cnt = 0;
    for (long b : fringe)
        if (b < 0) cnt += (-b + hh - 1) / hh;
    return cnt;
}

bool SemiModule::is_normalized() const { return missing_naturals() == negatives(); }

SemiModule SemiModule::shifted(long t) const {
    SemiModule s = *this;
    for (auto& b : s.fringe) b += t;
    return s;
}

SemiModule SemiModule::normalize() const {
    long hh = h();
    long sum = std::accumulate(fringe.begin(), fringe.end(), 0L);
    long target = hh * (hh - 1) / 2;
    long diff = target - sum;
    if (diff % hh != 0)
        throw ShiftNotIntegral("normalization shift is not integral"); // indicates a bug
    return shifted(diff / hh);
}

void SemiModule::validate() const {
    require_coprime(m, n);
    long hh = h();
    if ((long)fringe.size() != hh) throw NotASemimodule("fringe must have h elements");
    std::vector<bool> seen((size_t)hh, false);
    for (long b : fringe) {
        long r = divmod(b, hh).second;
        if (seen[(size_t)r]) throw NotASemimodule("fringe hits a residue class twice");
        seen[(size_t)r] = true;
    }
    for (long b : fringe) {
        if (!member(b + m)) throw NotASemimodule("m + A not contained in A");
        if (!member(b + n)) throw NotASemimodule("n + A not contained in A");
    }
}

SemiModule SemiModule::closure(long m, long n, const std::vector<long>& gens) {
    require_coprime(m, n);
    if (gens.empty()) throw NotASemimodule("no generators");
    long hh = m + n;
    // per residue class, the least reachable value
    std::map<long, long> least;
    // reachable set gens + m*N + n*N; saturate classes via BFS bounded by
    // min + m*n (Frobenius bound per class shift)
    std::vector<long> work = gens;
    std::set<long> seen(gens.begin(), gens.end());
    long lo = *std::min_element(gens.begin(), gens.end());
    long hi = lo + m * n + hh; // every class is reached by then
    while (!work.empty()) {
        long x = work.back();
        work.pop_back();
        long r = divmod(x, hh).second;
        auto it = least.find(r);
        if (it == least.end() || x < it->second) least[r] = x;
        for (long y : {x + m, x + n}) {
            if (y <= hi && !seen.count(y)) {
                seen.insert(y);
                work.push_back(y);
            }
        }
    }
    if ((long)least.size() != hh) throw NotASemimodule("generators failed to reach every class");
    SemiModule s{m, n, {}};
    for (auto& [r, b] : least) s.fringe.push_back(b);
    std::sort(s.fringe.begin(), s.fringe.end());
    s.validate();
    return s;
}

std::string SemiModule::str() const {
    std::ostringstream os;
    for (size_t i = 0; i < fringe.size(); ++i) {
        if (i) os << ",";
        os << fringe[i];
    }
    return os.str();
}

// ---- Cycle ----

bool Cycle::is_normalized() const {
    long sum = std::accumulate(values.begin(), values.end(), 0L);
    return sum == h() * (h() - 1) / 2;
}

void Cycle::validate() const {
    require_coprime(m, n);
    long hh = h();
    if ((long)values.size() != hh) throw NotASemimodule("cycle must have h entries");
    for (size_t i = 1; i < values.size(); ++i)
        if (values[i] >= values[0]) throw NotASemimodule("b_0 must be the strict maximum");
    for (size_t i = 1; i < values.size(); ++i) {
        long step = values[i] - values[i - 1];
        if (step != m && step != -n) throw NotASemimodule("steps must be +m or -n");
    }
    if (values.back() + m != values[0]) throw NotASemimodule("wrap step must be +m");
    std::vector<bool> seen((size_t)hh, false);
    for (long b : values) {
        long r = divmod(b, hh).second;
        if (seen[(size_t)r]) throw NotASemimodule("cycle hits a residue class twice");
        seen[(size_t)r] = true;
    }
}

std::vector<size_t> Cycle::plus_positions() const {
    std::set<long> vals(values.begin(), values.end());
    std::vector<size_t> out;
    for (size_t i = 0; i < values.size(); ++i)
        if (vals.count(values[i] + m)) out.push_back(i);
    return out;
}

std::vector<size_t> Cycle::minus_positions() const {
    std::set<long> vals(values.begin(), values.end());
    std::vector<size_t> out;
    for (size_t i = 0; i < values.size(); ++i)
        if (vals.count(values[i] - n)) out.push_back(i);
    return out;
}

std::vector<std::pair<size_t, size_t>> Cycle::vb_pairs() const {
    auto plus = plus_positions();
    auto minus = minus_positions();
    std::vector<std::pair<size_t, size_t>> out;
    for (size_t d : plus)
        for (size_t i : minus)
            if (values[i] < values[d]) out.emplace_back(d, i);
    std::sort(out.begin(), out.end());
    return out;
}

Cycle cycle_from_semimodule(const SemiModule& a) {
    a.validate();
    std::set<long> fr(a.fringe.begin(), a.fringe.end());
    Cycle b{a.m, a.n, {}};
    long cur = *fr.rbegin();
    for (long i = 0; i < a.h(); ++i) {
        b.values.push_back(cur);
        if (i + 1 == a.h()) break;
        bool down = fr.count(cur - a.n), up = fr.count(cur + a.m);
        if (down == up)
            throw NotASemimodule("cycle step is not unique"); // cannot happen for valid A
        cur = down ? cur - a.n : cur + a.m;
    }
    b.validate();
    return b;
}

SemiModule semimodule_from_cycle(const Cycle& b) {
    b.validate();
    SemiModule a{b.m, b.n, b.values};
    std::sort(a.fringe.begin(), a.fringe.end());
    a.validate();
    return a;
}

unsigned long long binomial(unsigned h, unsigned k) {
    if (k > h) return 0;
    unsigned __int128 r = 1;
    for (unsigned i = 1; i <= k; ++i) {
        r = r * (h - k + i) / i; // exact at each step
        if (r > (unsigned __int128)UINT64_MAX) throw Error("binomial overflow");
    }
    return (unsigned long long)r;
}

unsigned long long cycle_count_formula(long m, long n) {
    require_coprime(m, n);
    unsigned long long b = binomial((unsigned)(m + n), (unsigned)m);
    if (b % (unsigned long long)(m + n) != 0)
        throw Error("C(h,m) not divisible by h"); // impossible for coprime m, n
    return b / (unsigned long long)(m + n);
}

std::vector<Cycle> enumerate_cycles(long m, long n) {
    require_coprime(m, n);
    long h = m + n;
    // steps after b_0: h-1 of them, exactly n-1 are +m (the wrap is forced
    // +m); keep sequences whose partial sums stay strictly negative
    std::vector<Cycle> out;
    std::vector<long> vals((size_t)h);
    vals[0] = 0;
    struct Rec {
        long m, n, h;
        std::vector<long>* vals;
        std::vector<Cycle>* out;
        void go(long pos, long ups_left, long downs_left) {
            if (pos == h) {
                Cycle c{m, n, *vals};
                // shift to the normalised representative
                long sum = std::accumulate(vals->begin(), vals->end(), 0L);
                long target = h * (h - 1) / 2;
                if ((target - sum) % h != 0)
                    throw ShiftNotIntegral("enumeration produced a non-integral shift");
                long t = (target - sum) / h;
                for (auto& v : c.values) v += t;
                out->push_back(std::move(c));
                return;
            }
            long prev = (*vals)[(size_t)pos - 1];
            if (ups_left > 0 && prev + m < 0) {
                (*vals)[(size_t)pos] = prev + m;
                go(pos + 1, ups_left - 1, downs_left);
            }
            if (downs_left > 0 && prev - n < 0) {
                (*vals)[(size_t)pos] = prev - n;
                go(pos + 1, ups_left, downs_left - 1);
            }
        }
    } rec{m, n, h, &vals, &out};
    rec.go(1, n - 1, m);
    for (auto& c : out) c.validate();
    std::sort(out.begin(), out.end(),
              [](const Cycle& a, const Cycle& b) { return a.values < b.values; });
    unsigned long long expect = cycle_count_formula(m, n);
    if (out.size() != expect)
        throw Error("cycle enumeration count mismatch: got " + std::to_string(out.size()) +
                    ", formula gives " + std::to_string(expect));
    return out;
}

long PavingProfile::euler() const {
    return std::accumulate(d.begin(), d.end(), 0L);
}

PavingProfile paving_profile(long m, long n) {
    require_coprime(m, n);
    PavingProfile pr;
    pr.m = m;
    pr.n = n;
    pr.dim = (m - 1) * (n - 1) / 2;
    pr.d.assign((size_t)pr.dim + 1, 0);
    for (const auto& c : enumerate_cycles(m, n)) {
        size_t v = c.vb_pairs().size();
        if ((long)v > pr.dim) throw Error("cell dimension exceeds the moduli dimension");
        pr.d[v] += 1;
    }
    return pr;
}

// ---- dimension formulas ----

Rational dim_formula(const IsocrystalShape& shape) {
    const auto& copies = shape.copies();
    Rational dim(0);
    for (const auto& c : copies) dim += Rational((c.m - 1) * (c.n - 1), 2);
    for (size_t a = 0; a < copies.size(); ++a)
        for (size_t b = a + 1; b < copies.size(); ++b)
            dim += Rational(copies[a].m * copies[b].n);
    return dim;
}

Rational dim_rho_formula(const IsocrystalShape& shape) {
    long h = shape.height();
    // nu: ascending slopes, each lambda_j repeated l_j h_j times
    std::vector<Rational> nu;
    for (const auto& s : shape.summands())
        for (long t = 0; t < s.mult * s.h(); ++t) nu.emplace_back(s.m, s.h());
    // mu: ascending 0/1 with sum l_j m_j ones
    long ones = 0;
    for (const auto& s : shape.summands()) ones += s.mult * s.m;
    Rational acc(0);
    for (long i = 1; i <= h; ++i) {
        Rational w(2 * i - h - 1, 2);
        Rational mu_i = (i > h - ones) ? Rational(1) : Rational(0);
        acc += w * (mu_i - nu[(size_t)i - 1]);
    }
    return acc - Rational(defect(shape), 2);
}

long defect(const IsocrystalShape& shape) {
    return shape.height() - shape.summand_count();
}

long moduli_dimension(const IsocrystalShape& shape) {
    Rational d1 = dim_formula(shape);
    Rational d2 = dim_rho_formula(shape);
    if (d1 != d2)
        throw FormulaMismatch("dimension formulas disagree on " + shape.str() + ": " +
                              std::to_string(boost::rational_cast<double>(d1)) + " vs " +
                              std::to_string(boost::rational_cast<double>(d2)));
    if (d1.denominator() != 1)
        throw FormulaMismatch("dimension is not an integer on " + shape.str());
    return (long)d1.numerator();
}

// ---- pi0, heights, smoothness ----

Pi0Descriptor pi0_descriptor(const IsocrystalShape& shape) {
    Pi0Descriptor d;
    for (const auto& s : shape.summands()) {
        if (s.m == 0)
            d.ht_et += s.mult * s.h();
        else if (s.n == 0)
            d.ht_mult += s.mult * s.h();
        else
            d.has_bi = true;
    }
    return d;
}

std::pair<long, long> height_reachability(long m, long n, long target) {
    require_coprime(m, n);
    long h = m + n;
    auto [g, a0, b0] = ext_gcd(h, m);
    if (g != 1) throw NonCoprime("gcd(h, m) must be 1"); // implied by (m,n) coprime
    long a = a0 * target, b = b0 * target;
    // shrink the witness: (a, b) -> (a - k*m, b + k*h) keeps a*h + b*m
    if (m > 0) {
        long k = a / m;
        a -= k * m;
        b += k * h;
        // keep |b| small instead: choose representative with 0 <= a < m
        if (a < 0) {
            a += m;
            b -= h;
        }
    }
    return {a, b};
}

std::pair<long, long> height_reachability(const IsocrystalShape& shape, long target) {
    for (const auto& s : shape.summands())
        if (s.bi_infinitesimal()) return height_reachability(s.m, s.n, target);
    throw NoBiPart("shape " + shape.str() + " has no bi-infinitesimal summand");
}

SmoothnessVerdict smoothness(const IsocrystalShape& shape) {
    Pi0Descriptor parts = pi0_descriptor(shape);
    if (!parts.has_bi) return {Smoothness::SmoothDim0, "ordinary"};
    // collect the bi-infinitesimal summands
    long bi_copies = 0;
    long m = 0, n = 0;
    for (const auto& s : shape.summands()) {
        if (!s.bi_infinitesimal()) continue;
        bi_copies += s.mult;
        m = s.m;
        n = s.n;
    }
    if (bi_copies > 1) return {Smoothness::NotSmooth, "components-not-irreducible"};
    long mn_min = std::min(m, n), mn_max = std::max(m, n);
    if (mn_min == 1) return {Smoothness::SmoothDim0, "min-one"};
    if (mn_min == 2 && mn_max == 3) return {Smoothness::SmoothP1, "slope-2-5-or-3-5"};
    if (mn_min == 2) return {Smoothness::NotSmooth, "tangent-space-excess"};
    return {Smoothness::NotSmooth, "poincare-duality-fails"};
}

std::string smoothness_name(Smoothness s) {
    switch (s) {
        case Smoothness::SmoothDim0: return "SmoothDim0";
        case Smoothness::SmoothP1: return "SmoothP1";
        case Smoothness::NotSmooth: return "NotSmooth";
    }
    return "?";
}

} // namespace pdiv
