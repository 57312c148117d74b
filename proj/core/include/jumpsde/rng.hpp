// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace jumpsde {

/// SplitMix64 finaliser (Stafford variant 13), a bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t z) noexcept;

/// Seed of substream `index` derived from `master`:
///   mix64(mix64(master) ^ index)
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// Counter-based 64-bit generator: the n-th output (n = 1, 2, ...) is
/// mix64(seed + n * 0x9E3779B97F4A7C15). This is SplitMix64, so any
/// implementation of that algorithm reproduces the stream.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next_u64() noexcept;

    /// Uniform on the open interval (0, 1): ((u >> 11) + 0.5) * 2^-53.
    double uniform_open() noexcept;

    /// Standard normal by the Box-Muller transform. Both variates of a pair
    /// are used: the cosine branch first, then the cached sine branch.
    double standard_normal() noexcept;

    /// Poisson(mean) by sequential CDF inversion. Means above 500 are split
    /// into equal chunks no larger than 500 whose samples are summed.
    std::uint64_t poisson(double mean) noexcept;

private:
    std::uint64_t state_;
    double cached_normal_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace jumpsde
