// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace jumpsde {

class CounterRng;

struct NormalAmplitude {
    double mean = 0.0;
    double std = 1.0;
};

struct ConstantAmplitude {
    double value = 0.0;
};

struct ExponentialAmplitude {
    double rate = 1.0;
};

struct UniformAmplitude {
    double lo = 0.0;
    double hi = 1.0;
};

/// Law of the jump amplitudes R_k. Default-constructs to Normal(0, 1).
class AmplitudeDistribution {
public:
    using Law = std::variant<NormalAmplitude, ConstantAmplitude, ExponentialAmplitude, UniformAmplitude>;

    AmplitudeDistribution() = default;
    /// Throws ValidationError on std <= 0, rate <= 0, lo >= hi or non-finite parameters.
    AmplitudeDistribution(Law law);  // NOLINT(google-explicit-constructor)

    const Law& law() const noexcept { return law_; }

    double sample(CounterRng& rng) const;

    /// E[R] and E[R^2].
    double mean() const noexcept;
    double second_moment() const noexcept;

    /// `normal(m,s)`, `constant(v)`, `exponential(rate)` or `uniform(lo,hi)`.
    std::string to_string() const;
    /// Inverse of to_string. Throws ValidationError.
    static AmplitudeDistribution parse(std::string_view text);

    friend bool operator==(const AmplitudeDistribution& a, const AmplitudeDistribution& b);

private:
    Law law_ = NormalAmplitude{};
};

/// One realisation of the compound Poisson process C(t) on [0, T].
///
/// C is right-continuous: the value at a jump time includes that jump.
class CompoundPoissonPath {
public:
    /// Throws ValidationError unless horizon > 0, intensity >= 0, the jump
    /// times are strictly increasing in (0, T] and the amplitudes are finite
    /// and as many as the times.
    CompoundPoissonPath(double intensity, double horizon, AmplitudeDistribution dist, std::uint64_t seed,
                        std::vector<double> jump_times, std::vector<double> amplitudes);

    double intensity() const noexcept { return intensity_; }
    double horizon() const noexcept { return horizon_; }
    const AmplitudeDistribution& distribution() const noexcept { return dist_; }
    std::uint64_t seed() const noexcept { return seed_; }
    const std::vector<double>& jump_times() const noexcept { return times_; }
    const std::vector<double>& amplitudes() const noexcept { return amplitudes_; }
    std::size_t size() const noexcept { return times_.size(); }

    /// Number of sampled times nudged upward to break exact ties.
    unsigned tie_adjustments() const noexcept { return tie_adjustments_; }

    /// C(t). Throws ValidationError for t outside [0, T].
    double c_value(double t) const;
    /// C(t-), the left limit. Throws ValidationError for t outside [0, T].
    double c_left(double t) const;
    /// C(t) - C(t-): the amplitude of the jump at exactly t, otherwise 0.
    double increment(double t) const noexcept;

    /// FNV-1a hash over the bit patterns of times and amplitudes.
    std::uint64_t digest() const noexcept;

private:
    friend CompoundPoissonPath sample_path(double, double, const AmplitudeDistribution&, std::uint64_t);

    double intensity_;
    double horizon_;
    AmplitudeDistribution dist_;
    std::uint64_t seed_;
    std::vector<double> times_;
    std::vector<double> amplitudes_;
    std::vector<double> cumulative_;
    unsigned tie_adjustments_ = 0;
};

/// Draw a path. From a CounterRng seeded with `seed`: the jump count
/// N ~ Poisson(intensity * T), then N uniforms on (0, T) which are scaled and
/// sorted, then N amplitudes in sorted-time order.
///
/// Throws ValidationError if intensity < 0 or T <= 0.
CompoundPoissonPath sample_path(double intensity, double horizon, const AmplitudeDistribution& dist,
                                std::uint64_t seed);

/// CSV with a `# intensity=... T=... dist=... seed=...` line, header
/// `k,t_k,R_k`, then one row per jump (k counts from 1).
void write_path_csv(std::ostream& out, const CompoundPoissonPath& path);
/// Throws ValidationError with a line number on malformed input.
CompoundPoissonPath read_path_csv(std::istream& in);

}  // namespace jumpsde
