// SPDX-License-Identifier: Apache-2.0
#include "jumpsde/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "jumpsde/error.hpp"
#include "jumpsde/format.hpp"

namespace jumpsde {

void SdeModel::validate() const {
    if (f.references(Variable::C)) {
        throw ValidationError("drift f must not reference c");
    }
    if (g.references(Variable::C)) {
        throw ValidationError("diffusion g must not reference c");
    }
    if (reference && reference->references(Variable::X)) {
        throw ValidationError("reference solution must be a function of t and c only");
    }
    if (!std::isfinite(z0)) {
        throw ValidationError("z0 must be finite");
    }
}

void validate(const Interpretation& interp) {
    std::visit(
        [](const auto& i) {
            using T = std::decay_t<decltype(i)>;
            if constexpr (!std::is_same_v<T, Ito>) {
                validate(JumpScheme{i});
            }
        },
        interp);
}

std::string label(const Interpretation& interp) {
    return std::visit(
        [](const auto& i) -> std::string {
            using T = std::decay_t<decltype(i)>;
            if constexpr (std::is_same_v<T, Ito>) {
                return "ito";
            } else if constexpr (std::is_same_v<T, DiPaolaFalsone>) {
                return "df" + std::to_string(i.terms);
            } else if constexpr (std::is_same_v<T, MarcusOde>) {
                return "marcus_" + std::string(to_string(i.scheme)) + "_h" + format_short(i.h_max);
            } else {
                if (const auto* lin = std::get_if<LinearJump>(&i.kind)) {
                    return "closed_linear_" + format_short(lin->a) + "_" + format_short(lin->b);
                }
                return "closed_constant_" + format_short(std::get<ConstantJump>(i.kind).b);
            }
        },
        interp);
}

double jump_increment(const Interpretation& interp, const Expr& g, double z, double t, double r) {
    return std::visit(
        [&](const auto& i) -> double {
            using T = std::decay_t<decltype(i)>;
            if constexpr (std::is_same_v<T, Ito>) {
                return ito_jump(g, z, t, r);
            } else {
                return apply_jump(JumpScheme{i}, g, z, t, r);
            }
        },
        interp);
}

void SimConfig::validate() const {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw ValidationError("horizon T must be positive and finite");
    }
    if (!(dt > 0.0) || !(dt <= horizon)) {
        throw ValidationError("dt must satisfy 0 < dt <= T");
    }
    for (double s : stops) {
        if (!(s >= 0.0 && s <= horizon)) {
            throw ValidationError("checkpoint " + format_short(s) + " outside [0, T]");
        }
    }
    jumpsde::validate(interpretation);
}

std::string_view to_string(RecordTag tag) noexcept {
    switch (tag) {
        case RecordTag::Grid: return "grid";
        case RecordTag::PreJump: return "pre";
        case RecordTag::PostJump: return "post";
    }
    return "?";
}

RecordTag parse_record_tag(std::string_view text) {
    if (text == "grid") {
        return RecordTag::Grid;
    }
    if (text == "pre") {
        return RecordTag::PreJump;
    }
    if (text == "post") {
        return RecordTag::PostJump;
    }
    throw ValidationError("unknown record tag '" + std::string(text) + "'");
}

double Trajectory::state_at(double t) const {
    for (auto it = records.rbegin(); it != records.rend(); ++it) {
        if (it->t == t) {
            return it->z;
        }
    }
    throw ValidationError("trajectory has no record at t = " + format_short(t));
}

double drift_step(const Expr& f, double z, double t, double dt, RkScheme scheme) {
    return rk_step(scheme, [&f](double s, double y) { return eval(f, y, s); }, t, z, dt);
}

std::vector<double> uniform_grid(double dt, double horizon) {
    if (!(dt > 0.0) || !(dt <= horizon)) {
        throw ValidationError("dt must satisfy 0 < dt <= T");
    }
    const double ratio = horizon / dt;
    const double nearest = std::round(ratio);
    const bool aligned = std::fabs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio);
    const auto steps = static_cast<std::size_t>(aligned ? nearest : std::floor(ratio) + 1.0);
    std::vector<double> grid;
    grid.reserve(steps + 2);
    for (std::size_t i = 0; i < steps; ++i) {
        grid.push_back(static_cast<double>(i) * dt);
    }
    if (!grid.empty() && grid.back() >= horizon) {
        grid.pop_back();
    }
    grid.push_back(horizon);
    return grid;
}

namespace {

// `where` is only called on failure.
template <class Where, class Fn>
auto annotated(const Where& where, Fn&& fn) {
    try {
        return fn();
    } catch (const DomainError& err) {
        throw DomainError(where() + ": " + err.what());
    } catch (const NonSmoothError& err) {
        throw NonSmoothError(where() + ": " + err.what());
    } catch (const NonFiniteError& err) {
        throw NonFiniteError(where() + ": " + err.what());
    }
}

}  // namespace

Trajectory simulate_path(const SdeModel& model, const CompoundPoissonPath& path, const SimConfig& config) {
    model.validate();
    config.validate();
    if (config.horizon != path.horizon()) {
        throw ValidationError("simulation horizon " + format_short(config.horizon) + " differs from path horizon " +
                              format_short(path.horizon()));
    }

    std::vector<double> landing = uniform_grid(config.dt, config.horizon);
    landing.insert(landing.end(), config.stops.begin(), config.stops.end());
    std::sort(landing.begin(), landing.end());
    landing.erase(std::unique(landing.begin(), landing.end()), landing.end());

    const auto& times = path.jump_times();
    const auto& amps = path.amplitudes();

    Trajectory traj;
    traj.records.reserve(landing.size() + 2 * times.size());
    traj.jumps.reserve(times.size());

    double t = 0.0;
    double z = model.z0;
    traj.records.push_back({t, z, RecordTag::Grid});

    auto advance = [&](double target) {
        z = annotated([&] { return "drift step at t=" + format_short(t); }, [&] {
            const double next = drift_step(model.f, z, t, target - t, config.drift_scheme);
            if (!std::isfinite(next)) {
                throw NonFiniteError("drift produced a non-finite state");
            }
            return next;
        });
        t = target;
    };

    std::size_t k = 0;
    for (std::size_t i = 1; i < landing.size(); ++i) {
        const double stop = landing[i];
        for (; k < times.size() && times[k] <= stop; ++k) {
            const double tk = times[k];
            if (tk > t) {
                advance(tk);
            }
            traj.records.push_back({tk, z, RecordTag::PreJump});
            const double delta = annotated([&] { return "jump " + std::to_string(k) + " at t=" + format_short(tk); }, [&] {
                const double d = jump_increment(config.interpretation, model.g, z, tk, amps[k]);
                if (!std::isfinite(d) || !std::isfinite(z + d)) {
                    throw NonFiniteError("jump produced a non-finite state");
                }
                return d;
            });
            traj.jumps.push_back({k, tk, amps[k], z, delta});
            z = z + delta;
            t = tk;
            traj.records.push_back({tk, z, RecordTag::PostJump});
        }
        if (stop > t) {
            advance(stop);
            traj.records.push_back({t, z, RecordTag::Grid});
        }
    }
    return traj;
}

std::vector<double> reference_path(const SdeModel& model, const CompoundPoissonPath& path,
                                   const std::vector<double>& times) {
    if (!model.reference) {
        throw ValidationError("model has no reference solution");
    }
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) {
        out.push_back(eval(*model.reference, 0.0, t, path.c_value(t)));
    }
    return out;
}

std::vector<double> reference_for(const SdeModel& model, const CompoundPoissonPath& path, const Trajectory& traj) {
    if (!model.reference) {
        throw ValidationError("model has no reference solution");
    }
    std::vector<double> out;
    out.reserve(traj.records.size());
    for (const auto& rec : traj.records) {
        const double c = rec.tag == RecordTag::PreJump ? path.c_left(rec.t) : path.c_value(rec.t);
        out.push_back(eval(*model.reference, 0.0, rec.t, c));
    }
    return out;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << "t,z,tag\n";
    for (const auto& rec : traj.records) {
        out << format_real(rec.t) << ',' << format_real(rec.z) << ',' << to_string(rec.tag) << '\n';
    }
}

Trajectory read_trajectory_csv(std::istream& in) {
    Trajectory traj;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view view = trim(line);
        if (view.empty()) {
            continue;
        }
        if (!have_header) {
            if (view != "t,z,tag") {
                throw ValidationError("trajectory csv line " + std::to_string(line_no) + ": expected header 't,z,tag'");
            }
            have_header = true;
            continue;
        }
        try {
            const auto cols = split_top_level(view, ',');
            if (cols.size() != 3) {
                throw ValidationError("expected 3 columns");
            }
            traj.records.push_back({parse_real(cols[0], "t"), parse_real(cols[1], "z"), parse_record_tag(cols[2])});
        } catch (const ValidationError& err) {
            throw ValidationError("trajectory csv line " + std::to_string(line_no) + ": " + err.what());
        }
    }
    if (!have_header) {
        throw ValidationError("trajectory csv: missing header");
    }
    return traj;
}

}  // namespace jumpsde
