#pragma once

#include <cstdint>
#include <random>

namespace sgfs {

/// Portable seeded generator. The engine is std::mt19937_64 (bit-exact across
/// standard libraries); the distributions are implemented here rather than
/// taken from <random>, whose output is implementation-defined.
///
///  - uniform01: top 53 bits of one engine draw, scaled to [0, 1)
///  - uniform_index(n): rejection sampling on the 64-bit draw, no modulo bias
///  - normal: Marsaglia polar method, caching the second variate
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }
    double uniform01();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t uniform_index(std::uint64_t n);
    double normal();
    double normal(double mean, double sd) { return mean + sd * normal(); }

private:
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

/// Deterministic per-replication seed derived from a base seed (splitmix64).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace sgfs
