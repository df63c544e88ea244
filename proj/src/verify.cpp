#include "pdiv/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "pdiv/grammar.hpp"
#include "pdiv/json_out.hpp"

namespace pdiv::verify {

namespace {

using Clock = std::chrono::steady_clock;

struct Timer {
    Clock::time_point t0 = Clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    }
};

Check run_check(const std::string& name, const std::function<std::string()>& body) {
    Timer t;
    Check c;
    c.name = name;
    try {
        c.detail = body(); // empty or a statistic; throws on failure
        c.pass = true;
    } catch (const std::exception& e) {
        c.pass = false;
        c.detail = e.what();
    }
    c.ms = t.ms();
    return c;
}

void fail(const std::string& msg) { throw Error(msg); }

void require(bool ok, const std::string& msg) {
    if (!ok) fail(msg);
}

// the ring battery of the padic module invariants
std::vector<std::tuple<uint64_t, unsigned, unsigned>> ring_battery() {
    return {{2, 1, 8}, {2, 2, 6}, {3, 1, 6}, {3, 2, 4}, {5, 1, 4}};
}

std::string fmt_ring(uint64_t p, unsigned a, unsigned N) {
    std::ostringstream os;
    os << "W(F_" << p << "^" << a << ")/p^" << N;
    return os.str();
}

} // namespace

bool Report::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

void Report::merge(const Report& o) {
    checks.insert(checks.end(), o.checks.begin(), o.checks.end());
}

// ---------------------------------------------------------------- witt

Report witt_suite(uint64_t seed, int cancel_instances) {
    Report rep;
    rep.suite = "witt";
    rep.seed = seed;

    rep.checks.push_back(run_check("ring-axioms", [&] {
        int count = 0;
        for (auto [p, a, N] : ring_battery()) {
            auto ring = WittRing::make(FiniteField::make(p, a), N);
            Rng rng(Rng::derive(seed, 11 + p * 100 + a));
            for (int t = 0; t < 30; ++t) {
                WittElement x = ring->sample(rng), y = ring->sample(rng), z = ring->sample(rng);
                require((x + y) + z == x + (y + z), "associativity of + in " + fmt_ring(p, a, N));
                require((x * y) * z == x * (y * z), "associativity of * in " + fmt_ring(p, a, N));
                require(x * (y + z) == x * y + x * z, "distributivity in " + fmt_ring(p, a, N));
                require(x + (-x) == ring->zero(), "negation in " + fmt_ring(p, a, N));
                require(x * ring->one() == x, "unit law in " + fmt_ring(p, a, N));
                require(x * y == y * x, "commutativity in " + fmt_ring(p, a, N));
                ++count;
            }
        }
        return std::to_string(count) + " random triples";
    }));

    rep.checks.push_back(run_check("sigma-ring-endomorphism", [&] {
        for (auto [p, a, N] : ring_battery()) {
            auto field = FiniteField::make(p, a);
            auto ring = WittRing::make(field, N);
            Rng rng(Rng::derive(seed, 23 + p * 100 + a));
            for (int t = 0; t < 25; ++t) {
                WittElement x = ring->sample(rng), y = ring->sample(rng);
                require(x.sigma() + y.sigma() == (x + y).sigma(), "sigma additive");
                require(x.sigma() * y.sigma() == (x * y).sigma(), "sigma multiplicative");
                require(x.sigma(1).sigma(-1) == x, "sigma o sigma^{-1} = id");
                require(x.sigma((long)a) == x, "sigma^a = id");
                FFElement c = field->sample(rng);
                require(ring->teichmuller(c).sigma() == ring->teichmuller(c.frobenius()),
                        "sigma[x] = [x^p]");
                require(ring->teichmuller(c).sigma((long)a) == ring->teichmuller(c),
                        "sigma^a fixes Teichmueller digits");
            }
        }
        return "";
    }));

    rep.checks.push_back(run_check("teichmuller-multiplicative-F9", [&] {
        auto field = FiniteField::make(3, 2);
        auto ring = WittRing::make(field, 3);
        auto elems = field->elements();
        for (const auto& x : elems)
            for (const auto& y : elems)
                require(ring->teichmuller(x) * ring->teichmuller(y) == ring->teichmuller(x * y),
                        "[x][y] = [xy] failed in W(F_9)");
        return std::to_string(elems.size() * elems.size()) + " pairs";
    }));

    rep.checks.push_back(run_check("valuation-rules", [&] {
        for (auto [p, a, N] : ring_battery()) {
            auto ring = WittRing::make(FiniteField::make(p, a), N);
            Rng rng(Rng::derive(seed, 37 + p * 100 + a));
            for (int t = 0; t < 40; ++t) {
                WittElement x = ring->scale_p(ring->sample(rng), (unsigned)rng.below(N));
                WittElement y = ring->scale_p(ring->sample(rng), (unsigned)rng.below(N));
                unsigned vx = x.valuation(), vy = y.valuation();
                require((x * y).valuation() == std::min(vx + vy, N), "val(xy)");
                require((x + y).valuation() >= std::min(vx, vy), "val(x+y)");
            }
        }
        return "";
    }));

    rep.checks.push_back(run_check("digit-roundtrip", [&] {
        for (auto [p, a, N] : ring_battery()) {
            auto field = FiniteField::make(p, a);
            auto ring = WittRing::make(field, N);
            Rng rng(Rng::derive(seed, 41 + p * 100 + a));
            for (int t = 0; t < 20; ++t) {
                std::vector<FFElement> ds;
                for (unsigned i = 0; i < N; ++i) ds.push_back(field->sample(rng));
                require(ring->from_digits(ds).digits() == ds, "digits(reassemble) != id");
                WittElement x = ring->sample(rng);
                require(ring->from_digits(x.digits()) == x, "reassemble(digits) != id");
            }
        }
        // exhaustive on W(F_4)/2^3: 4^3 digit streams = all 64 ring elements
        auto field = FiniteField::make(2, 2);
        auto ring = WittRing::make(field, 3);
        auto elems = field->elements();
        std::set<std::vector<uint64_t>> images;
        for (const auto& d0 : elems)
            for (const auto& d1 : elems)
                for (const auto& d2 : elems) {
                    std::vector<FFElement> ds{d0, d1, d2};
                    WittElement x = ring->from_digits(ds);
                    require(x.digits() == ds, "exhaustive digit round-trip failed");
                    images.insert(x.coeffs());
                }
        require(images.size() == 64, "digit streams are not in bijection with W(F_4)/p^3");
        return "64 exhaustive + random";
    }));

    rep.checks.push_back(run_check("digit-cancellation", [&] {
        auto battery = ring_battery();
        int done = 0;
        size_t which = 0;
        Rng rng(Rng::derive(seed, 53));
        while (done < cancel_instances) {
            auto [p, a, N] = battery[which];
            which = (which + 1) % battery.size();
            auto field = FiniteField::make(p, a);
            auto ring = WittRing::make(field, N);
            for (int t = 0; t < cancel_instances / 5 + 1 && done < cancel_instances; ++t, ++done) {
                // w0 is additive
                WittElement x = ring->sample(rng), y = ring->sample(rng);
                require((x + y).digit(0) == x.digit(0) + y.digit(0), "w0(x+y) = w0(x)+w0(y)");
                // b with digits < n zero and digit_n a unit
                unsigned n = (unsigned)rng.below(N - 1);
                std::vector<FFElement> bd;
                for (unsigned i = 0; i < N; ++i) bd.push_back(field->sample(rng));
                for (unsigned i = 0; i < n; ++i) bd[i] = field->zero();
                while (bd[n].is_zero()) bd[n] = field->sample(rng);
                WittElement b = ring->from_digits(bd);
                // [lambda] scaling multiplies the leading digit by lambda
                FFElement lam0 = field->sample(rng);
                require((b * ring->teichmuller(lam0)).digit(n) == bd[n] * lam0,
                        "[lambda]b leading digit");
                // a + [lambda]b with lambda = -digit_n(a)/digit_n(b):
                // digits below n unchanged, digit n cancels
                WittElement av = ring->sample(rng);
                FFElement lam = -(av.digit(n) * bd[n].inverse());
                WittElement s = av + b * ring->teichmuller(lam);
                for (unsigned i = 0; i < n; ++i)
                    require(s.digit(i) == av.digit(i), "digits below n changed");
                require(s.digit(n).is_zero(), "digit n did not cancel");
            }
        }
        return std::to_string(done) + " instances";
    }));

    return rep;
}

// ---------------------------------------------------------------- counts

Report counts_suite(int max_h) {
    Report rep;
    rep.suite = "counts";

    rep.checks.push_back(run_check("cycle-count", [&] {
        long pairs = 0;
        for (long h = 2; h <= max_h; ++h)
            for (long m = 1; m < h; ++m) {
                if (std::gcd(m, h) != 1) continue;
                auto cycles = enumerate_cycles(m, h - m);
                require(cycles.size() == cycle_count_formula(m, h - m),
                        "count mismatch at (" + std::to_string(m) + "," + std::to_string(h - m) + ")");
                ++pairs;
            }
        return std::to_string(pairs) + " coprime pairs, h <= " + std::to_string(max_h);
    }));

    rep.checks.push_back(run_check("cycle-validity", [&] {
        for (long h = 2; h <= std::min(max_h, 12); ++h)
            for (long m = 1; m < h; ++m) {
                if (std::gcd(m, h) != 1) continue;
                for (const auto& c : enumerate_cycles(m, h - m)) {
                    c.validate();
                    require(c.is_normalized(), "cycle not normalised");
                    require(std::accumulate(c.values.begin(), c.values.end(), 0L) ==
                                h * (h - 1) / 2,
                            "normalisation sum");
                    auto sm = semimodule_from_cycle(c);
                    require(sm.is_normalized(), "counting and sum normalisations disagree");
                }
            }
        return "";
    }));

    rep.checks.push_back(run_check("semimodule-cycle-roundtrip", [&] {
        long count = 0;
        for (long h = 2; h <= 9; ++h)
            for (long m = 1; m < h; ++m) {
                if (std::gcd(m, h) != 1) continue;
                for (const auto& c : enumerate_cycles(m, h - m)) {
                    require(cycle_from_semimodule(semimodule_from_cycle(c)) == c,
                            "round trip failed");
                    ++count;
                }
            }
        return std::to_string(count) + " semimodules, h <= 9";
    }));

    rep.checks.push_back(run_check("profile-anchors", [&] {
        require(paving_profile(2, 3).d == std::vector<long>({1, 1}), "(2,3) profile");
        for (long l = 1; l <= 5; ++l) {
            auto pr = paving_profile(2, 2 * l + 1);
            require((long)pr.d.size() == l + 1, "(2,2l+1) profile length");
            require(std::all_of(pr.d.begin(), pr.d.end(), [](long x) { return x == 1; }),
                    "(2,2l+1) profile must be all ones");
        }
        require(paving_profile(3, 4).d == std::vector<long>({1, 1, 2, 1}), "(3,4) profile");
        return "";
    }));

    rep.checks.push_back(run_check("profile-properties", [&] {
        for (long h = 2; h <= 12; ++h)
            for (long m = 1; m < h; ++m) {
                long n = h - m;
                if (std::gcd(m, n) != 1) continue;
                auto pr = paving_profile(m, n);
                require(pr.d.front() == 1, "d[0] = 1");
                require(pr.d.back() == 1, "d[dim] = 1");
                if (m > 1 && n > 1) require(pr.d[1] == 1, "d[1] = 1 for m,n > 1");
                long mn_min = std::min(m, n);
                if (mn_min == 2)
                    require(std::all_of(pr.d.begin(), pr.d.end(), [](long x) { return x == 1; }),
                            "min = 2 forces an all-ones profile");
                if (mn_min > 2) require(pr.d[pr.dim - 1] >= 2, "d[dim-1] >= 2 for min > 2");
                bool symmetric = true;
                for (long j = 0; j <= pr.dim; ++j)
                    if (pr.d[(size_t)j] != pr.d[(size_t)(pr.dim - j)]) symmetric = false;
                require(symmetric == (mn_min <= 2), "duality symmetry iff min <= 2");
            }
        return "h <= 12";
    }));

    rep.checks.push_back(run_check("smoothness-table", [&] {
        auto check = [](const std::string& shape, Smoothness want, const std::string& reason) {
            auto v = smoothness(*parse_shape(shape));
            require(v.verdict == want && v.reason == reason,
                    "smoothness(" + shape + ") = " + smoothness_name(v.verdict) + "/" + v.reason);
        };
        check("0:1^2,1:0^3", Smoothness::SmoothDim0, "ordinary");
        check("0:1", Smoothness::SmoothDim0, "ordinary");
        check("1:2", Smoothness::SmoothDim0, "min-one");
        check("1:5", Smoothness::SmoothDim0, "min-one");
        check("5:1", Smoothness::SmoothDim0, "min-one");
        check("2:3", Smoothness::SmoothP1, "slope-2-5-or-3-5");
        check("3:2", Smoothness::SmoothP1, "slope-2-5-or-3-5");
        check("0:1,2:3,1:0", Smoothness::SmoothP1, "slope-2-5-or-3-5");
        check("2:5", Smoothness::NotSmooth, "tangent-space-excess");
        check("5:2", Smoothness::NotSmooth, "tangent-space-excess");
        check("3:4", Smoothness::NotSmooth, "poincare-duality-fails");
        check("3:5", Smoothness::NotSmooth, "poincare-duality-fails");
        check("1:2,1:1", Smoothness::NotSmooth, "components-not-irreducible");
        check("2:3^2", Smoothness::NotSmooth, "components-not-irreducible");
        // the min > 2 verdicts are confirmed by the profile asymmetry
        for (auto [m, n] : {std::pair<long, long>{3, 4}, {3, 5}}) {
            auto pr = paving_profile(m, n);
            require(pr.d[1] != pr.d[pr.dim - 1], "d[1] != d[dim-1] must witness non-smoothness");
        }
        return "";
    }));

    rep.checks.push_back(run_check("pi0-descriptors", [&] {
        auto d1 = pi0_descriptor(*parse_shape("2:3"));
        require(d1 == Pi0Descriptor{0, 0, true}, "bi-only descriptor");
        auto d2 = pi0_descriptor(*parse_shape("0:1^2,1:0^3"));
        require(d2 == Pi0Descriptor{3, 2, false}, "ordinary descriptor");
        auto d3 = pi0_descriptor(*parse_shape("0:1,2:3,1:0^2"));
        require(d3 == Pi0Descriptor{2, 1, true}, "mixed descriptor");
        return "";
    }));

    rep.checks.push_back(run_check("height-reachability", [&] {
        auto [a, b] = height_reachability(2, 3, 1);
        require(5 * a + 2 * b == 1, "(2,3) target 1");
        Rng rng(99);
        for (int t = 0; t < 50; ++t) {
            long m = 2 + (long)rng.below(5), n = 1 + (long)rng.below(6);
            if (std::gcd(m, n) != 1) continue;
            long target = (long)rng.below(41) - 20;
            auto [x, y] = height_reachability(m, n, target);
            require(x * (m + n) + y * m == target, "a h + b m = target");
        }
        bool threw = false;
        try {
            height_reachability(*parse_shape("0:1,1:0"), 1);
        } catch (const NoBiPart&) {
            threw = true;
        }
        require(threw, "NoBiPart expected for an ordinary shape");
        return "";
    }));

    return rep;
}

// ---------------------------------------------------------------- formulas

namespace {

// Thm-B-style evaluation over summands (not copies): an independent
// arrangement of the same sum, used as the cross-term consistency check.
Rational dim_by_summands(const IsocrystalShape& shape) {
    const auto& ss = shape.summands();
    Rational dim(0);
    for (const auto& s : ss) {
        dim += Rational(s.mult * (s.m - 1) * (s.n - 1), 2);
        dim += Rational(s.mult * (s.mult - 1) / 2 * s.m * s.n); // intra-slope pairs
    }
    for (size_t j = 0; j < ss.size(); ++j)
        for (size_t j2 = j + 1; j2 < ss.size(); ++j2)
            dim += Rational(ss[j].mult * ss[j2].mult * ss[j].m * ss[j2].n);
    return dim;
}

ShapePtr random_shape(Rng& rng) {
    for (;;) {
        int parts = 1 + (int)rng.below(3);
        std::vector<Summand> ss;
        long total = 0;
        std::set<std::pair<long, long>> slopes;
        for (int t = 0; t < parts; ++t) {
            long m = (long)rng.below(8), n = (long)rng.below(8);
            if (m == 0) n = 1;
            if (n == 0) m = 1;
            if (m + n < 1 || std::gcd(m, m + n) != 1) continue;
            long mult = 1 + (long)rng.below(3);
            long g = std::gcd(m, n);
            if (!slopes.insert({m / std::max(g, 1L), n / std::max(g, 1L)}).second) continue;
            ss.push_back({m, n, mult});
            total += mult * (m + n);
        }
        if (ss.empty() || total > 30) continue;
        try {
            return IsocrystalShape::make(std::move(ss));
        } catch (const Error&) {
            continue;
        }
    }
}

} // namespace

Report formulas_suite(uint64_t seed, int trials) {
    Report rep;
    rep.suite = "formulas";
    rep.seed = seed;

    rep.checks.push_back(run_check("dimension-anchors", [&] {
        require(moduli_dimension(*parse_shape("2:3")) == 1, "dim 2:3 = 1");
        require(moduli_dimension(*parse_shape("1:4")) == 0, "dim 1:4 = 0");
        require(moduli_dimension(*parse_shape("1:7")) == 0, "dim 1:7 = 0");
        require(moduli_dimension(*parse_shape("1:2,1:1")) == 1, "dim [(1,2),(1,1)] = 1");
        require(moduli_dimension(*parse_shape("2:3^2")) == 8, "dim [(2,3)^2] = 8");
        require(dim_rho_formula(*parse_shape("1:2,1:1")) == Rational(1), "rho route on 1:2,1:1");
        require(defect(*parse_shape("1:2,1:1")) == 3, "defect of 1:2,1:1");
        require(defect(*parse_shape("2:3^2")) == 8, "defect of 2:3^2");
        return "";
    }));

    rep.checks.push_back(run_check("formula-agreement", [&] {
        Rng rng(Rng::derive(seed, 7));
        for (int t = 0; t < trials; ++t) {
            ShapePtr s = random_shape(rng);
            moduli_dimension(*s); // throws FormulaMismatch on disagreement
        }
        return std::to_string(trials) + " random shapes, h <= 30";
    }));

    rep.checks.push_back(run_check("cross-term-arrangements", [&] {
        Rng rng(Rng::derive(seed, 9));
        for (int t = 0; t < 60; ++t) {
            ShapePtr s = random_shape(rng);
            require(dim_formula(*s) == dim_by_summands(*s),
                    "copy expansion vs summand grouping on " + s->str());
        }
        return "";
    }));

    return rep;
}

// ---------------------------------------------------------------- lattices

namespace {

// least element of the numerical semigroup <m,n> in each class mod h
std::vector<long> apery_fringe(long m, long n) {
    long h = m + n;
    std::vector<long> least((size_t)h, -1);
    long found = 0;
    for (long x = 0; found < h; ++x) {
        bool in = false;
        for (long b = 0; b * n <= x && !in; ++b)
            if ((x - b * n) % m == 0) in = true;
        if (in && least[(size_t)(x % h)] < 0) {
            least[(size_t)(x % h)] = x;
            ++found;
        }
    }
    std::sort(least.begin(), least.end());
    return least;
}

struct ClosureStats {
    int trials = 0;
    std::string first_failure;
};

Check closure_battery_task(long m, long n, uint64_t p, uint64_t seed, int trials) {
    std::ostringstream name;
    name << "closure-battery-" << m << ":" << n << "-p" << p;
    return run_check(name.str(), [&]() -> std::string {
        ShapePtr shape = IsocrystalShape::simple(m, n);
        long h = m + n;
        auto field = FiniteField::make(p, (unsigned)(2 * h));
        auto ring = WittRing::make(field, default_precision(*shape));
        auto M0 = minimal_lattice(shape, ring);
        long c = c_constant(*shape);
        auto enumerated = enumerate_cycles(m, n);
        auto expect_fringe = apery_fringe(m, n);
        Rng rng(Rng::derive(seed, 1000 + (uint64_t)(m * 37 + n * 101) + p));
        for (int t = 0; t < trials; ++t) {
            IsoVector v = sample_condition_star(shape, ring, rng);
            DieudonneLattice L = dieudonne_closure(v);
            require(is_dieudonne(L), "closure is not F,V-stable");
            long volume = vol(L);
            require(volume == c, "vol = " + std::to_string(volume) + ", expected c = " +
                                     std::to_string(c));
            require(a_invariant(L) == 1, "a-invariant != 1");
            require(lattice_equal(p_closure(L), M0), "P(M) != M0");
            SemiModule A = semimodule_of(L);
            require(A.fringe == expect_fringe,
                    "first indices are not the <m,n> semigroup pattern");
            require(vol_from_semimodule(L) == volume, "semimodule volume route disagrees");
            SemiModule norm = A.normalize();
            Cycle B = cycle_from_semimodule(norm);
            require(std::count(enumerated.begin(), enumerated.end(), B) == 1,
                    "normalised semimodule missing from the enumeration");
        }
        return std::to_string(trials) + " trials";
    });
}

Check paving_task(long m, long n, uint64_t seed, int sample_cap) {
    std::ostringstream name;
    name << "paving-points-" << m << ":" << n;
    return run_check(name.str(), [&]() -> std::string {
        ShapePtr shape = IsocrystalShape::simple(m, n);
        auto field = FiniteField::make(2, 3); // F_8
        auto ring = WittRing::make(field, default_precision(*shape));
        auto elems = field->elements();
        int lattices = 0;
        for (const auto& B : enumerate_cycles(m, n)) {
            SemiModule A = semimodule_from_cycle(B);
            auto vb = B.vb_pairs();
            size_t dim = vb.size();
            // coordinate tuples: exhaustive when dim <= 2, sampled otherwise
            std::vector<std::vector<FFElement>> tuples;
            if (dim <= 2) {
                size_t total = 1;
                for (size_t i = 0; i < dim; ++i) total *= elems.size();
                for (size_t code = 0; code < total; ++code) {
                    std::vector<FFElement> tup;
                    size_t c = code;
                    for (size_t i = 0; i < dim; ++i) {
                        tup.push_back(elems[c % elems.size()]);
                        c /= elems.size();
                    }
                    tuples.push_back(tup);
                }
            } else {
                Rng rng(Rng::derive(seed, 555 + (uint64_t)(m * 13 + n)));
                std::set<std::vector<uint64_t>> seen;
                while ((int)tuples.size() < sample_cap) {
                    std::vector<FFElement> tup;
                    std::vector<uint64_t> key;
                    for (size_t i = 0; i < dim; ++i) {
                        FFElement e = field->sample(rng);
                        tup.push_back(e);
                        key.push_back(e.pack());
                    }
                    if (seen.insert(key).second) tuples.push_back(tup);
                }
            }
            std::set<std::string> fingerprints;
            for (const auto& tup : tuples) {
                std::map<std::pair<size_t, size_t>, FFElement> coords;
                for (size_t i = 0; i < dim; ++i) coords[vb[i]] = tup[i];
                DieudonneLattice L = lattice_from_cycle_point(shape, ring, A, coords);
                require(is_dieudonne(L), "paving lattice is not F,V-stable");
                require(vol(L) == 0, "paving lattice volume != 0");
                require(semimodule_of(L) == A, "section property failed");
                fingerprints.insert(lattice_to_json(L).dump());
                ++lattices;
            }
            require(fingerprints.size() == tuples.size(),
                    "coordinates -> lattice map is not injective on " + A.str());
        }
        return std::to_string(lattices) + " lattices";
    });
}

} // namespace

Report lattices_suite(uint64_t seed, const LatticeOptions& opt) {
    Report rep;
    rep.suite = "lattices";
    rep.seed = seed;

    rep.checks.push_back(run_check("isocrystal-operators", [&] {
        struct Case {
            std::string shape;
            uint64_t p;
        };
        std::vector<Case> cases = {{"1:1", 2}, {"2:3", 2}, {"3:2", 3},
                                   {"3:4", 2}, {"1:1^2", 2}, {"1:2,1:1", 3}};
        for (const auto& cs : cases) {
            ShapePtr shape = parse_shape(cs.shape);
            auto field = FiniteField::make(cs.p, (unsigned)shape->lcm_heights() * 2);
            auto ring = WittRing::make(field, default_precision(*shape));
            Rng rng(Rng::derive(seed, 17 + cs.p));
            for (int t = 0; t < 20; ++t) {
                IsoVector v = sample_vector(shape, ring, rng);
                require(v.apply_F().apply_V() == v.scale_p(1), "FV = p on " + cs.shape);
                require(v.apply_V().apply_F() == v.scale_p(1), "VF = p on " + cs.shape);
                require(v.apply_Vinv().apply_V() == v, "V V^{-1} = id on " + cs.shape);
                for (size_t j = 0; j < shape->summands().size(); ++j) {
                    IsoVector w = v;
                    for (long k = 0; k < shape->summands()[j].h(); ++k) w = w.apply_pi(j);
                    // pi_j^{h_j} = p on summand j, identity elsewhere
                    IsoVector expect = IsoVector::zero(shape, ring);
                    for (const auto& cp : shape->copies()) {
                        IsoVector part = IsoVector::zero(shape, ring);
                        // project v to this copy
                        std::vector<IsoVector::Component> comps(shape->copies().size());
                        for (size_t ci = 0; ci < comps.size(); ++ci)
                            comps[ci].cert = (int)ring->precision();
                        comps[shape->copy_index(cp.j, cp.i)] =
                            v.component(shape->copy_index(cp.j, cp.i));
                        part = IsoVector::from_components(shape, ring, comps);
                        expect = expect + (cp.j == j ? part.scale_p(1) : part);
                    }
                    require(w == expect, "pi^h = p on summand of " + cs.shape);
                    for (size_t j2 = 0; j2 < shape->summands().size(); ++j2) {
                        require(v.apply_pi(j).apply_sigma_j(j2) ==
                                    v.apply_sigma_j(j2).apply_pi(j),
                                "pi/sigma commute on " + cs.shape);
                    }
                    require(v.apply_pi(j).apply_F() == v.apply_F().apply_pi(j),
                            "pi/F commute on " + cs.shape);
                    require(v.apply_sigma_j(j).apply_F() == v.apply_F().apply_sigma_j(j),
                            "sigma_j/F commute on " + cs.shape);
                }
                if (shape->is_simple()) {
                    auto fi = v.first_index();
                    if (fi) {
                        require(v.apply_F().first_index()->l == fi->l + shape->copies()[0].m,
                                "F shifts the first index by m");
                        require(v.apply_V().first_index()->l == fi->l + shape->copies()[0].n,
                                "V shifts the first index by n");
                    }
                }
            }
        }
        return "6 shapes x 20 vectors";
    }));

    rep.checks.push_back(run_check("minimal-lattice", [&] {
        for (auto [mn, p] : std::vector<std::pair<std::pair<long, long>, uint64_t>>{
                 {{2, 3}, 2}, {{3, 4}, 3}}) {
            ShapePtr shape = IsocrystalShape::simple(mn.first, mn.second);
            auto ring =
                WittRing::make(FiniteField::make(p, (unsigned)(2 * shape->height())),
                               default_precision(*shape));
            auto M0 = minimal_lattice(shape, ring);
            require(vol(M0) == 0, "vol(M0) = 0");
            require(vol(scale_lattice(M0, 1)) == shape->height(), "vol(pM0) = h");
            require(is_dieudonne(M0), "M0 is F,V-stable");
            require(lattice_equal(p_closure(M0), M0), "P(M0) = M0");
            SemiModule A = semimodule_of(M0);
            std::vector<long> expect(M0.rank());
            std::iota(expect.begin(), expect.end(), 0L);
            require(A.fringe == expect, "A(M0) = N");
        }
        return "";
    }));

    rep.checks.push_back(run_check("index-sets", [&] {
        {
            auto I = index_set(*parse_shape("2:3"));
            require(I.c == 1 && I.members == std::vector<std::pair<size_t, long>>{{0, 1}},
                    "I(2:3) = {1}");
        }
        {
            auto I = index_set(*parse_shape("1:4"));
            require(I.c == 0 && I.members.empty(), "I(1:4) empty");
        }
        require(index_set(*parse_shape("1:2,1:1")).c == 1, "|I| = 1 on 1:2,1:1");
        require(index_set(*parse_shape("2:3^2")).c == 8, "|I| = 8 on 2:3^2");
        for (const std::string& s : {"3:4", "2:5", "3:5", "1:2,1:1,2:1", "1:1^3"})
            index_set(*parse_shape(s)); // |I| = c asserted internally
        return "";
    }));

    rep.checks.push_back(run_check("vol-p-scaling", [&] {
        ShapePtr shape = IsocrystalShape::simple(2, 3);
        auto ring = WittRing::make(FiniteField::make(2, 10), default_precision(*shape));
        Rng rng(Rng::derive(seed, 71));
        for (int t = 0; t < 10; ++t) {
            IsoVector v = sample_condition_star(shape, ring, rng);
            DieudonneLattice L = dieudonne_closure(v);
            require(vol(scale_lattice(L, 1)) == vol(L) + shape->height(),
                    "vol(pL) = vol(L) + h");
        }
        return "";
    }));

    // the heavy batteries fan out across (shape, prime) pairs
    std::vector<std::function<Check()>> tasks;
    for (auto [m, n] : opt.shapes)
        for (uint64_t p : opt.primes) {
            long mm = m, nn = n;
            uint64_t pp = p;
            tasks.push_back(
                [mm, nn, pp, seed, &opt] { return closure_battery_task(mm, nn, pp, seed, opt.trials); });
        }
    tasks.push_back([seed, &opt] { return paving_task(2, 3, seed, opt.paving_sample); });
    tasks.push_back([seed, &opt] { return paving_task(3, 4, seed, opt.paving_sample); });

    std::vector<Check> results(tasks.size());
    if (opt.parallel && tasks.size() > 1) {
        unsigned workers = std::min<unsigned>(std::thread::hardware_concurrency(),
                                              (unsigned)tasks.size());
        if (workers < 1) workers = 1;
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    size_t i = next.fetch_add(1);
                    if (i >= tasks.size()) return;
                    results[i] = tasks[i]();
                }
            });
        for (auto& th : pool) th.join();
    } else {
        for (size_t i = 0; i < tasks.size(); ++i) results[i] = tasks[i]();
    }
    for (auto& c : results) rep.checks.push_back(std::move(c));

    return rep;
}

Report all_suites(uint64_t seed, const LatticeOptions& opt) {
    Report rep;
    rep.suite = "all";
    rep.seed = seed;
    rep.merge(witt_suite(seed));
    rep.merge(counts_suite());
    rep.merge(formulas_suite(seed));
    rep.merge(lattices_suite(seed, opt));
    return rep;
}

} // namespace pdiv::verify
