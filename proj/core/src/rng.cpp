// SPDX-License-Identifier: Apache-2.0
#include "jumpsde/rng.hpp"

#include <cmath>
#include <numbers>

namespace jumpsde {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;
constexpr double kPoissonChunk = 500.0;

std::uint64_t poisson_inversion(CounterRng& rng, double mean) noexcept {
    const double u = rng.uniform_open();
    double p = std::exp(-mean);
    double cdf = p;
    std::uint64_t k = 0;
    // The cap guards against a CDF that rounds below u forever.
    const auto cap = static_cast<std::uint64_t>(mean + 40.0 * std::sqrt(mean) + 100.0);
    while (u > cdf && k < cap) {
        ++k;
        p *= mean / static_cast<double>(k);
        cdf += p;
    }
    return k;
}

}  // namespace

std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30U)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27U)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31U);
}

std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return mix64(mix64(master) ^ index);
}

std::uint64_t CounterRng::next_u64() noexcept {
    state_ += kGamma;
    return mix64(state_);
}

double CounterRng::uniform_open() noexcept {
    return (static_cast<double>(next_u64() >> 11U) + 0.5) * kTwoPow53Inv;
}

double CounterRng::standard_normal() noexcept {
    if (have_cached_) {
        have_cached_ = false;
        return cached_normal_;
    }
    const double u1 = uniform_open();
    const double u2 = uniform_open();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_normal_ = radius * std::sin(angle);
    have_cached_ = true;
    return radius * std::cos(angle);
}

std::uint64_t CounterRng::poisson(double mean) noexcept {
    if (!(mean > 0.0)) {
        return 0;
    }
    const auto chunks = static_cast<std::uint64_t>(std::ceil(mean / kPoissonChunk));
    const double piece = mean / static_cast<double>(chunks);
    std::uint64_t total = 0;
    for (std::uint64_t i = 0; i < chunks; ++i) {
        total += poisson_inversion(*this, piece);
    }
    return total;
}

}  // namespace jumpsde
