#pragma once

#include <cstdint>
#include <random>

namespace qbaf {

/// Deterministic random source. std::mt19937_64 has a fixed sequence for
/// a fixed seed on every platform; the helpers below avoid
/// std::uniform_*_distribution, whose mapping is implementation-defined,
/// so the same seed yields the same draws everywhere.
class Rng {
  public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n), unbiased via rejection. n must be > 0.
    uint64_t below(uint64_t n) {
        const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    bool coin() { return (engine_() & 1) != 0; }

  private:
    std::mt19937_64 engine_;
};

/// SplitMix64 step; used to derive independent per-instance seeds from an
/// experiment seed without correlated low bits.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed for the i-th instance of an experiment seeded with `seed`.
inline uint64_t instance_seed(uint64_t seed, uint64_t i) { return splitmix64(seed + i); }

}  // namespace qbaf
