#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdiv/lattice.hpp"

namespace pdiv::verify {

struct Check {
    std::string name;
    bool pass = false;
    std::string detail; // short statistic or the first failure
    double ms = 0.0;
};

struct Report {
    std::string suite;
    uint64_t seed = 0;
    std::vector<Check> checks;
    bool all_pass() const;
    void merge(const Report& o);
};

/// Knobs for the lattice battery; defaults are the full battery sizes.
struct LatticeOptions {
    int trials = 50;                  // per (shape, prime)
    std::vector<std::pair<long, long>> shapes = {{2, 3}, {3, 2}, {2, 5}, {3, 4}};
    std::vector<uint64_t> primes = {2, 3};
    int smith_trials = 100;
    int paving_sample = 128; // tuples sampled when exhaustive is too large
    bool parallel = true;
};

/// Witt-kernel battery: ring axioms, sigma, valuation and digit identities,
/// and the digit-cancellation identities on `cancel_instances` seeded
/// instances across the ring battery {(2,1,8),(2,2,6),(3,1,6),(3,2,4),(5,1,4)}.
Report witt_suite(uint64_t seed, int cancel_instances = 1000);

/// Cycle/semimodule counting and Betti-profile battery (exact integers).
Report counts_suite(int max_h = 14);

/// Dimension-formula battery: anchors plus `trials` random shapes of total
/// height <= 30 on which both formulas are evaluated independently.
Report formulas_suite(uint64_t seed, int trials = 200);

/// Lattice battery: closures of condition-(*) generators (vol = c, a = 1,
/// P(M) = M0, semimodule enumerated), elementary-divisor cross-checks,
/// paving points over F_8, index sets, isocrystal operator identities.
Report lattices_suite(uint64_t seed, const LatticeOptions& opt = {});

Report all_suites(uint64_t seed, const LatticeOptions& opt = {});

} // namespace pdiv::verify
