#pragma once

#include <cstdint>
#include <random>

namespace pdiv {

/// Deterministic RNG used by the verification batteries. All randomized
/// checks derive their streams from a single 64-bit seed so that runs are
/// reproducible byte for byte.
class Rng {
  public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    uint64_t u64() { return gen_(); }

    /// Uniform in [0, n).
    uint64_t below(uint64_t n) {
        std::uniform_int_distribution<uint64_t> d(0, n - 1);
        return d(gen_);
    }

    /// Derive an independent child seed; used to fan tasks out to workers
    /// while keeping the result independent of scheduling.
    static uint64_t derive(uint64_t seed, uint64_t index) {
        // splitmix64 step
        uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

  private:
    std::mt19937_64 gen_;
};

} // namespace pdiv
