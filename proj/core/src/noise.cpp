// SPDX-License-Identifier: Apache-2.0
#include "jumpsde/noise.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "jumpsde/error.hpp"
#include "jumpsde/format.hpp"
#include "jumpsde/rng.hpp"

namespace jumpsde {

// ---------------------------------------------------------------------------
// AmplitudeDistribution

namespace {

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw ValidationError(std::string(what) + " must be finite");
    }
}

}  // namespace

AmplitudeDistribution::AmplitudeDistribution(Law law) : law_(law) {
    std::visit(
        [](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, NormalAmplitude>) {
                require_finite(d.mean, "normal mean");
                require_finite(d.std, "normal std");
                if (!(d.std > 0.0)) {
                    throw ValidationError("normal std must be positive");
                }
            } else if constexpr (std::is_same_v<T, ConstantAmplitude>) {
                require_finite(d.value, "constant amplitude");
            } else if constexpr (std::is_same_v<T, ExponentialAmplitude>) {
                require_finite(d.rate, "exponential rate");
                if (!(d.rate > 0.0)) {
                    throw ValidationError("exponential rate must be positive");
                }
            } else {
                require_finite(d.lo, "uniform lo");
                require_finite(d.hi, "uniform hi");
                if (!(d.lo < d.hi)) {
                    throw ValidationError("uniform requires lo < hi");
                }
            }
        },
        law_);
}

double AmplitudeDistribution::sample(CounterRng& rng) const {
    return std::visit(
        [&rng](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, NormalAmplitude>) {
                return d.mean + d.std * rng.standard_normal();
            } else if constexpr (std::is_same_v<T, ConstantAmplitude>) {
                return d.value;
            } else if constexpr (std::is_same_v<T, ExponentialAmplitude>) {
                return -std::log(rng.uniform_open()) / d.rate;
            } else {
                return d.lo + (d.hi - d.lo) * rng.uniform_open();
            }
        },
        law_);
}

double AmplitudeDistribution::mean() const noexcept {
    return std::visit(
        [](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, NormalAmplitude>) {
                return d.mean;
            } else if constexpr (std::is_same_v<T, ConstantAmplitude>) {
                return d.value;
            } else if constexpr (std::is_same_v<T, ExponentialAmplitude>) {
                return 1.0 / d.rate;
            } else {
                return 0.5 * (d.lo + d.hi);
            }
        },
        law_);
}

double AmplitudeDistribution::second_moment() const noexcept {
    return std::visit(
        [](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, NormalAmplitude>) {
                return d.mean * d.mean + d.std * d.std;
            } else if constexpr (std::is_same_v<T, ConstantAmplitude>) {
                return d.value * d.value;
            } else if constexpr (std::is_same_v<T, ExponentialAmplitude>) {
                return 2.0 / (d.rate * d.rate);
            } else {
                return (d.lo * d.lo + d.lo * d.hi + d.hi * d.hi) / 3.0;
            }
        },
        law_);
}

std::string AmplitudeDistribution::to_string() const {
    return std::visit(
        [](const auto& d) -> std::string {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, NormalAmplitude>) {
                return "normal(" + format_short(d.mean) + "," + format_short(d.std) + ")";
            } else if constexpr (std::is_same_v<T, ConstantAmplitude>) {
                return "constant(" + format_short(d.value) + ")";
            } else if constexpr (std::is_same_v<T, ExponentialAmplitude>) {
                return "exponential(" + format_short(d.rate) + ")";
            } else {
                return "uniform(" + format_short(d.lo) + "," + format_short(d.hi) + ")";
            }
        },
        law_);
}

AmplitudeDistribution AmplitudeDistribution::parse(std::string_view text) {
    text = trim(text);
    const auto open = text.find('(');
    if (open == std::string_view::npos || text.back() != ')') {
        throw ValidationError("distribution must look like name(args), got '" + std::string(text) + "'");
    }
    const std::string name(trim(text.substr(0, open)));
    const auto args = split_top_level(text.substr(open + 1, text.size() - open - 2), ',');
    auto arg = [&](std::size_t i) { return parse_real(args[i], name + " parameter"); };
    auto arity = [&](std::size_t n) {
        if (args.size() != n || (n == 1 && args[0].empty())) {
            throw ValidationError(name + " takes " + std::to_string(n) + " parameter(s)");
        }
    };
    if (name == "normal") {
        arity(2);
        return AmplitudeDistribution(NormalAmplitude{arg(0), arg(1)});
    }
    if (name == "constant") {
        arity(1);
        return AmplitudeDistribution(ConstantAmplitude{arg(0)});
    }
    if (name == "exponential") {
        arity(1);
        return AmplitudeDistribution(ExponentialAmplitude{arg(0)});
    }
    if (name == "uniform") {
        arity(2);
        return AmplitudeDistribution(UniformAmplitude{arg(0), arg(1)});
    }
    throw ValidationError("unknown distribution '" + name + "'");
}

bool operator==(const AmplitudeDistribution& a, const AmplitudeDistribution& b) {
    return a.to_string() == b.to_string();
}

// ---------------------------------------------------------------------------
// CompoundPoissonPath

CompoundPoissonPath::CompoundPoissonPath(double intensity, double horizon, AmplitudeDistribution dist,
                                         std::uint64_t seed, std::vector<double> jump_times,
                                         std::vector<double> amplitudes)
    : intensity_(intensity),
      horizon_(horizon),
      dist_(dist),
      seed_(seed),
      times_(std::move(jump_times)),
      amplitudes_(std::move(amplitudes)) {
    if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) {
        throw ValidationError("horizon T must be positive and finite");
    }
    if (!(intensity_ >= 0.0) || !std::isfinite(intensity_)) {
        throw ValidationError("intensity must be non-negative and finite");
    }
    if (times_.size() != amplitudes_.size()) {
        throw ValidationError("jump_times and amplitudes differ in length");
    }
    cumulative_.reserve(times_.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < times_.size(); ++i) {
        const double tk = times_[i];
        if (!(tk > 0.0 && tk <= horizon_)) {
            throw ValidationError("jump time " + format_short(tk) + " lies outside (0, T]");
        }
        if (i > 0 && !(tk > times_[i - 1])) {
            throw ValidationError("jump times must be strictly increasing");
        }
        if (!std::isfinite(amplitudes_[i])) {
            throw ValidationError("jump amplitudes must be finite");
        }
        sum += amplitudes_[i];
        cumulative_.push_back(sum);
    }
}

double CompoundPoissonPath::c_value(double t) const {
    if (!(t >= 0.0 && t <= horizon_)) {
        throw ValidationError("time " + format_short(t) + " outside [0, T]");
    }
    const auto n = std::upper_bound(times_.begin(), times_.end(), t) - times_.begin();
    return n == 0 ? 0.0 : cumulative_[static_cast<std::size_t>(n - 1)];
}

double CompoundPoissonPath::c_left(double t) const {
    if (!(t >= 0.0 && t <= horizon_)) {
        throw ValidationError("time " + format_short(t) + " outside [0, T]");
    }
    const auto n = std::lower_bound(times_.begin(), times_.end(), t) - times_.begin();
    return n == 0 ? 0.0 : cumulative_[static_cast<std::size_t>(n - 1)];
}

double CompoundPoissonPath::increment(double t) const noexcept {
    const auto it = std::lower_bound(times_.begin(), times_.end(), t);
    if (it != times_.end() && *it == t) {
        return amplitudes_[static_cast<std::size_t>(it - times_.begin())];
    }
    return 0.0;
}

std::uint64_t CompoundPoissonPath::digest() const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](double v) {
        std::uint64_t bits = 0;
        std::memcpy(&bits, &v, sizeof bits);
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (8 * i)) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    };
    feed(horizon_);
    for (std::size_t i = 0; i < times_.size(); ++i) {
        feed(times_[i]);
        feed(amplitudes_[i]);
    }
    return h;
}

CompoundPoissonPath sample_path(double intensity, double horizon, const AmplitudeDistribution& dist,
                                std::uint64_t seed) {
    if (!(intensity >= 0.0) || !std::isfinite(intensity)) {
        throw ValidationError("intensity must be non-negative and finite");
    }
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw ValidationError("horizon T must be positive and finite");
    }
    CounterRng rng(seed);
    const std::uint64_t count = rng.poisson(intensity * horizon);
    std::vector<double> times(count);
    for (auto& tk : times) {
        tk = rng.uniform_open() * horizon;
    }
    std::sort(times.begin(), times.end());
    unsigned ties = 0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) {
            times[i] = std::nextafter(times[i - 1], std::numeric_limits<double>::infinity());
            ++ties;
        }
    }
    std::vector<double> amplitudes(count);
    for (auto& r : amplitudes) {
        r = dist.sample(rng);
    }
    CompoundPoissonPath path(intensity, horizon, dist, seed, std::move(times), std::move(amplitudes));
    path.tie_adjustments_ = ties;
    return path;
}

// ---------------------------------------------------------------------------
// CSV

void write_path_csv(std::ostream& out, const CompoundPoissonPath& path) {
    out << "# intensity=" << format_short(path.intensity()) << " T=" << format_short(path.horizon())
        << " dist=" << path.distribution().to_string() << " seed=" << path.seed() << '\n';
    out << "k,t_k,R_k\n";
    for (std::size_t i = 0; i < path.size(); ++i) {
        out << (i + 1) << ',' << format_real(path.jump_times()[i]) << ',' << format_real(path.amplitudes()[i]) << '\n';
    }
}

CompoundPoissonPath read_path_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& msg) -> ValidationError {
        return ValidationError("path csv line " + std::to_string(line_no) + ": " + msg);
    };

    double intensity = -1.0;
    double horizon = -1.0;
    AmplitudeDistribution dist;
    std::uint64_t seed = 0;
    bool have_meta = false;
    bool have_header = false;
    std::vector<double> times;
    std::vector<double> amps;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view view = trim(line);
        if (view.empty()) {
            continue;
        }
        try {
            if (view.front() == '#') {
                std::istringstream fields{std::string(view.substr(1))};
                std::string field;
                while (fields >> field) {
                    const auto eq = field.find('=');
                    if (eq == std::string::npos) {
                        throw fail("malformed metadata field '" + field + "'");
                    }
                    const std::string key = field.substr(0, eq);
                    const std::string value = field.substr(eq + 1);
                    if (key == "intensity") {
                        intensity = parse_real(value, "intensity");
                    } else if (key == "T") {
                        horizon = parse_real(value, "T");
                    } else if (key == "dist") {
                        dist = AmplitudeDistribution::parse(value);
                    } else if (key == "seed") {
                        seed = std::stoull(value);
                    } else {
                        throw fail("unknown metadata key '" + key + "'");
                    }
                }
                have_meta = true;
                continue;
            }
            if (!have_header) {
                if (view != "k,t_k,R_k") {
                    throw fail("expected header 'k,t_k,R_k'");
                }
                have_header = true;
                continue;
            }
            const auto cols = split_top_level(view, ',');
            if (cols.size() != 3) {
                throw fail("expected 3 columns");
            }
            if (std::stoull(cols[0]) != times.size() + 1) {
                throw fail("jump index out of sequence");
            }
            times.push_back(parse_real(cols[1], "t_k"));
            amps.push_back(parse_real(cols[2], "R_k"));
        } catch (const ValidationError& err) {
            const std::string msg = err.what();
            if (msg.rfind("path csv line", 0) == 0) {
                throw;
            }
            throw fail(msg);
        } catch (const std::logic_error&) {
            throw fail("malformed integer");
        }
    }
    if (!have_meta) {
        throw ValidationError("path csv: missing '# intensity=... T=...' metadata line");
    }
    if (!have_header) {
        throw ValidationError("path csv: missing header");
    }
    return CompoundPoissonPath(intensity, horizon, dist, seed, std::move(times), std::move(amps));
}

}  // namespace jumpsde
