#pragma once

#include <cstdint>

namespace splnc {

/// Portable deterministic generator: xoshiro256** seeded through SplitMix64.
///
/// A generator is addressed by (seed, stream). Streams with different ids
/// are statistically independent, which lets per-pixel or per-class work
/// draw from its own sequence regardless of evaluation order. Gaussian
/// variates use the Box-Muller transform so no platform distribution code
/// is involved.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Uniform integer on [0, n). n must be positive.
    std::uint64_t uniform_int(std::uint64_t n);
    /// Standard normal variate.
    double normal();

private:
    std::uint64_t s_[4];
    bool has_spare_ = false;
    double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace splnc
