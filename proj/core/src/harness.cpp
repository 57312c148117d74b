// SPDX-License-Identifier: Apache-2.0
#include "jumpsde/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include "jumpsde/error.hpp"
#include "jumpsde/format.hpp"
#include "jumpsde/rng.hpp"

namespace jumpsde {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

unsigned worker_count(unsigned requested, std::size_t jobs) {
    unsigned n = requested != 0 ? requested : std::max(1U, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

// Run job(i) for i in [0, count) on `threads` workers. If any job throws, the
// exception of the lowest index is rethrown with that index prepended.
template <class Job>
void parallel_for(std::size_t count, unsigned threads, const Job& job) {
    std::atomic<std::size_t> next{0};
    std::mutex mutex;
    std::size_t failed_index = std::numeric_limits<std::size_t>::max();
    std::exception_ptr failure;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) {
                return;
            }
            try {
                job(i);
            } catch (...) {
                std::lock_guard lock(mutex);
                if (i < failed_index) {
                    failed_index = i;
                    failure = std::current_exception();
                }
            }
        }
    };

    const unsigned n = worker_count(threads, count);
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n);
        for (unsigned w = 0; w < n; ++w) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    if (failure) {
        const std::string where = "path " + std::to_string(failed_index) + ": ";
        try {
            std::rethrow_exception(failure);
        } catch (const ValidationError& err) {
            throw ValidationError(where + err.what());
        } catch (const DomainError& err) {
            throw DomainError(where + err.what());
        } catch (const NonSmoothError& err) {
            throw NonSmoothError(where + err.what());
        } catch (const NonFiniteError& err) {
            throw NonFiniteError(where + err.what());
        }
    }
}

struct MemberOutcome {
    PathResult result;
    std::vector<double> checkpoint_values;
    bool floor_hit = false;
};

std::vector<double> effective_checkpoints(const EnsembleConfig& cfg) {
    if (cfg.checkpoints.empty()) {
        return {cfg.sim.horizon};
    }
    return cfg.checkpoints;
}

SimConfig with_stops(SimConfig sim, const std::vector<double>& checkpoints) {
    sim.stops.insert(sim.stops.end(), checkpoints.begin(), checkpoints.end());
    return sim;
}

MemberOutcome evaluate_member(const EnsembleConfig& cfg, const SimConfig& sim, const CompoundPoissonPath& path,
                              const Trajectory& traj, std::size_t index, const std::vector<double>& checkpoints) {
    MemberOutcome out;
    PathResult& r = out.result;
    r.index = index;
    r.seed = path.seed();
    r.path_digest = path.digest();
    r.jump_count = path.size();
    r.tie_adjustments = path.tie_adjustments();
    r.c_terminal = path.c_value(sim.horizon);
    r.terminal = traj.terminal();
    if (cfg.model.reference) {
        const std::vector<double> ref = reference_for(cfg.model, path, traj);
        const PathwiseError err = pathwise_error(traj, ref);
        r.terminal_reference = ref.back();
        r.terminal_abs_error = std::fabs(r.terminal - ref.back());
        r.terminal_rel_error = err.terminal_rel_error;
        r.max_rel_error = err.max_rel_error;
        out.floor_hit = err.floor_hit;
    } else {
        r.terminal_reference = kNaN;
        r.terminal_abs_error = kNaN;
        r.terminal_rel_error = kNaN;
        r.max_rel_error = kNaN;
    }
    out.checkpoint_values.reserve(checkpoints.size());
    for (double t : checkpoints) {
        out.checkpoint_values.push_back(traj.state_at(t));
    }
    return out;
}

ErrorReport aggregate(std::string label, bool has_reference, const std::vector<double>& checkpoints,
                      std::vector<MemberOutcome>& members) {
    ErrorReport report;
    report.label = std::move(label);
    report.has_reference = has_reference;
    const auto n = static_cast<double>(members.size());

    report.checkpoints.reserve(checkpoints.size());
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
        CheckpointStats s;
        s.t = checkpoints[c];
        // Shifted by the first member so that identical values give an exact
        // mean and zero variance.
        const double shift = members.front().checkpoint_values[c];
        double sum = 0.0;
        for (const auto& m : members) {
            sum += m.checkpoint_values[c] - shift;
        }
        const double offset = sum / n;
        s.mean = shift + offset;
        if (members.size() > 1) {
            double ss = 0.0;
            for (const auto& m : members) {
                const double d = m.checkpoint_values[c] - shift - offset;
                ss += d * d;
            }
            s.variance = ss / (n - 1.0);
            s.std_error = std::sqrt(s.variance / n);
        }
        report.checkpoints.push_back(s);
    }

    if (has_reference) {
        double rel_sum = 0.0;
        double abs_sum = 0.0;
        double rel_max = 0.0;
        double grid_max = 0.0;
        for (const auto& m : members) {
            rel_sum += m.result.terminal_rel_error;
            abs_sum += m.result.terminal_abs_error;
            rel_max = std::max(rel_max, m.result.terminal_rel_error);
            grid_max = std::max(grid_max, m.result.max_rel_error);
            report.floor_hit = report.floor_hit || m.floor_hit;
        }
        report.mean_terminal_rel_error = rel_sum / n;
        report.mean_terminal_abs_error = abs_sum / n;
        report.max_terminal_rel_error = rel_max;
        report.max_rel_error = grid_max;
    } else {
        report.mean_terminal_rel_error = kNaN;
        report.mean_terminal_abs_error = kNaN;
        report.max_terminal_rel_error = kNaN;
        report.max_rel_error = kNaN;
    }

    report.paths.reserve(members.size());
    for (auto& m : members) {
        report.paths.push_back(m.result);
    }
    return report;
}

double observed_order(ControlKind kind, double c_prev, double c, double e_prev, double e) {
    if (!(e_prev > 0.0) || !(e > 0.0)) {
        return kNaN;
    }
    if (kind == ControlKind::Terms) {
        return std::log2(e_prev / e);
    }
    return std::log(e_prev / e) / std::log(c_prev / c);
}

}  // namespace

void EnsembleConfig::validate() const {
    model.validate();
    sim.validate();
    if (n_paths == 0) {
        throw ValidationError("n_paths >= 1 required");
    }
    if (!(intensity >= 0.0) || !std::isfinite(intensity)) {
        throw ValidationError("intensity must be non-negative and finite");
    }
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        const double t = checkpoints[i];
        if (!(t >= 0.0 && t <= sim.horizon)) {
            throw ValidationError("checkpoint " + format_real(t) + " outside [0, T]");
        }
        if (i > 0 && !(t > checkpoints[i - 1])) {
            throw ValidationError("checkpoints must be strictly increasing");
        }
    }
    if (fixed_path && fixed_path->horizon() != sim.horizon) {
        throw ValidationError("fixed path horizon differs from the simulation horizon");
    }
}

CompoundPoissonPath member_path(const EnsembleConfig& cfg, std::size_t index) {
    if (cfg.fixed_path) {
        return *cfg.fixed_path;
    }
    return sample_path(cfg.intensity, cfg.sim.horizon, cfg.distribution, substream_seed(cfg.seed, index));
}

PathwiseError pathwise_error(const Trajectory& traj, const std::vector<double>& ref) {
    if (traj.records.size() != ref.size()) {
        throw ValidationError("reference has " + std::to_string(ref.size()) + " values for " +
                              std::to_string(traj.records.size()) + " trajectory records");
    }
    if (ref.empty()) {
        throw ValidationError("empty trajectory");
    }
    PathwiseError out;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        const double scale = std::fabs(ref[i]);
        if (scale < kRelativeErrorFloor) {
            out.floor_hit = true;
        }
        const double rel = std::fabs(traj.records[i].z - ref[i]) / std::max(scale, kRelativeErrorFloor);
        out.max_rel_error = std::max(out.max_rel_error, rel);
        if (i + 1 == ref.size()) {
            out.terminal_rel_error = rel;
        }
    }
    return out;
}

std::string_view to_string(ErrorStatistic s) noexcept {
    switch (s) {
        case ErrorStatistic::MeanTerminalRelative: return "mean_terminal_rel";
        case ErrorStatistic::MaxTerminalRelative: return "max_terminal_rel";
        case ErrorStatistic::MeanTerminalAbsolute: return "mean_terminal_abs";
    }
    return "?";
}

ErrorStatistic parse_error_statistic(std::string_view text) {
    for (auto s : {ErrorStatistic::MeanTerminalRelative, ErrorStatistic::MaxTerminalRelative,
                   ErrorStatistic::MeanTerminalAbsolute}) {
        if (text == to_string(s)) {
            return s;
        }
    }
    throw ValidationError("unknown error statistic '" + std::string(text) +
                          "' (expected mean_terminal_rel, max_terminal_rel or mean_terminal_abs)");
}

double ErrorReport::statistic(ErrorStatistic s) const noexcept {
    switch (s) {
        case ErrorStatistic::MeanTerminalRelative: return mean_terminal_rel_error;
        case ErrorStatistic::MaxTerminalRelative: return max_terminal_rel_error;
        case ErrorStatistic::MeanTerminalAbsolute: return mean_terminal_abs_error;
    }
    return kNaN;
}

ErrorReport run_ensemble(const EnsembleConfig& cfg) {
    cfg.validate();
    const std::vector<double> checkpoints = effective_checkpoints(cfg);
    const SimConfig sim = with_stops(cfg.sim, checkpoints);
    std::vector<MemberOutcome> members(cfg.n_paths);
    parallel_for(cfg.n_paths, cfg.threads, [&](std::size_t i) {
        const CompoundPoissonPath path = member_path(cfg, i);
        const Trajectory traj = simulate_path(cfg.model, path, sim);
        members[i] = evaluate_member(cfg, sim, path, traj, i, checkpoints);
    });
    return aggregate(label(cfg.sim.interpretation), cfg.model.reference.has_value(), checkpoints, members);
}

std::string_view to_string(ControlKind k) noexcept {
    switch (k) {
        case ControlKind::Dt: return "dt";
        case ControlKind::Terms: return "K";
        case ControlKind::HMax: return "h_max";
    }
    return "?";
}

ControlKind parse_control_kind(std::string_view text) {
    if (text == "dt") {
        return ControlKind::Dt;
    }
    if (text == "K") {
        return ControlKind::Terms;
    }
    if (text == "h_max") {
        return ControlKind::HMax;
    }
    throw ValidationError("unknown control '" + std::string(text) + "' (expected dt, K or h_max)");
}

ConvergenceTable convergence_study(const EnsembleConfig& cfg, ControlKind control, const std::vector<double>& values,
                                   ErrorStatistic statistic) {
    if (values.size() < 3) {
        throw ValidationError("a convergence study needs at least three control values");
    }
    const bool increasing = values[1] > values[0];
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (increasing ? !(values[i] > values[i - 1]) : !(values[i] < values[i - 1])) {
            throw ValidationError("control values must be strictly monotone");
        }
    }
    if (!cfg.model.reference) {
        throw ValidationError("a convergence study needs a reference solution");
    }
    if (control == ControlKind::Terms && !std::holds_alternative<DiPaolaFalsone>(cfg.sim.interpretation)) {
        throw ValidationError("a K study needs the series (df) interpretation");
    }
    if (control == ControlKind::HMax && !std::holds_alternative<MarcusOde>(cfg.sim.interpretation)) {
        throw ValidationError("an h_max study needs the Marcus ODE interpretation");
    }

    ConvergenceTable table;
    table.control = control;
    table.statistic = statistic;
    for (double v : values) {
        EnsembleConfig run = cfg;
        switch (control) {
            case ControlKind::Dt: run.sim.dt = v; break;
            case ControlKind::Terms: {
                if (!(v >= 1.0) || std::trunc(v) != v) {
                    throw ValidationError("K values must be positive integers");
                }
                std::get<DiPaolaFalsone>(run.sim.interpretation).terms = static_cast<unsigned>(v);
                break;
            }
            case ControlKind::HMax: std::get<MarcusOde>(run.sim.interpretation).h_max = v; break;
        }
        const ErrorReport report = run_ensemble(run);
        ConvergenceRow row{v, report.statistic(statistic), kNaN};
        if (!table.rows.empty()) {
            const auto& prev = table.rows.back();
            row.observed_order = observed_order(control, prev.control, v, prev.error, row.error);
        }
        table.rows.push_back(row);
    }
    return table;
}

Comparison compare_interpretations(const EnsembleConfig& cfg, const std::vector<Interpretation>& interpretations,
                                   std::size_t keep_series) {
    cfg.validate();
    if (interpretations.empty()) {
        throw ValidationError("compare needs at least one interpretation");
    }
    for (const auto& interp : interpretations) {
        validate(interp);
    }
    const std::vector<double> checkpoints = effective_checkpoints(cfg);
    const std::size_t n_interp = interpretations.size();
    const std::size_t keep = std::min(keep_series, cfg.n_paths);

    std::vector<std::vector<MemberOutcome>> members(n_interp, std::vector<MemberOutcome>(cfg.n_paths));
    std::vector<ComparisonSeries> series(keep);

    parallel_for(cfg.n_paths, cfg.threads, [&](std::size_t i) {
        const CompoundPoissonPath path = member_path(cfg, i);
        for (std::size_t j = 0; j < n_interp; ++j) {
            SimConfig sim = with_stops(cfg.sim, checkpoints);
            sim.interpretation = interpretations[j];
            const Trajectory traj = simulate_path(cfg.model, path, sim);
            members[j][i] = evaluate_member(cfg, sim, path, traj, i, checkpoints);
            if (i < keep) {
                ComparisonSeries& s = series[i];
                if (j == 0) {
                    s.path_index = i;
                    for (const auto& rec : traj.records) {
                        s.t.push_back(rec.t);
                        s.tags.push_back(rec.tag);
                        s.c.push_back(rec.tag == RecordTag::PreJump ? path.c_left(rec.t) : path.c_value(rec.t));
                    }
                    if (cfg.model.reference) {
                        s.reference = reference_for(cfg.model, path, traj);
                    }
                    s.z.resize(n_interp);
                }
                auto& column = s.z[j];
                column.reserve(traj.records.size());
                for (const auto& rec : traj.records) {
                    column.push_back(rec.z);
                }
            }
        }
    });

    Comparison out;
    out.interpretations = interpretations;
    for (std::size_t j = 0; j < n_interp; ++j) {
        out.labels.push_back(label(interpretations[j]));
        out.reports.push_back(
            aggregate(out.labels.back(), cfg.model.reference.has_value(), checkpoints, members[j]));
    }
    out.series = std::move(series);
    return out;
}

double linear_model_error_estimate(double alpha, double a, const SimConfig& sim, const CompoundPoissonPath& path) {
    const auto* marcus = std::get_if<MarcusOde>(&sim.interpretation);
    if (marcus == nullptr) {
        throw ValidationError("the linear error estimate applies to the Marcus ODE interpretation");
    }
    auto truncation = [](RkScheme scheme, double h) {
        const double ah = std::fabs(h);
        return scheme == RkScheme::RK2 ? ah * ah * ah / 6.0 : ah * ah * ah * ah * ah / 120.0;
    };

    std::vector<double> landing = uniform_grid(sim.dt, sim.horizon);
    landing.insert(landing.end(), sim.stops.begin(), sim.stops.end());
    landing.insert(landing.end(), path.jump_times().begin(), path.jump_times().end());
    std::sort(landing.begin(), landing.end());
    landing.erase(std::unique(landing.begin(), landing.end()), landing.end());

    double total = 0.0;
    for (std::size_t i = 1; i < landing.size(); ++i) {
        total += truncation(sim.drift_scheme, alpha * (landing[i] - landing[i - 1]));
    }
    for (double r : path.amplitudes()) {
        if (r == 0.0) {
            continue;
        }
        const auto n = static_cast<double>(marcus_substeps(r, marcus->h_max));
        total += n * truncation(marcus->scheme, a * r / n);
    }
    return total;
}

void write_report_csv(std::ostream& out, const ErrorReport& report) {
    out << "index,seed,jumps,c_T,z_T,reference_T,abs_error,rel_error,max_rel_error\n";
    for (const auto& p : report.paths) {
        out << p.index << ',' << p.seed << ',' << p.jump_count << ',' << format_real(p.c_terminal) << ','
            << format_real(p.terminal) << ',' << format_real(p.terminal_reference) << ','
            << format_real(p.terminal_abs_error) << ',' << format_real(p.terminal_rel_error) << ','
            << format_real(p.max_rel_error) << '\n';
    }
}

void write_convergence_csv(std::ostream& out, const ConvergenceTable& table) {
    out << "control,error,observed_order\n";
    for (const auto& row : table.rows) {
        out << format_real(row.control) << ',' << format_real(row.error) << ',' << format_real(row.observed_order)
            << '\n';
    }
}

void write_comparison_csv(std::ostream& out, const Comparison& cmp, std::size_t series_index) {
    if (series_index >= cmp.series.size()) {
        throw ValidationError("comparison series index out of range");
    }
    const ComparisonSeries& s = cmp.series[series_index];
    out << "t,tag,c,reference";
    for (const auto& l : cmp.labels) {
        out << ',' << l;
    }
    out << '\n';
    for (std::size_t row = 0; row < s.t.size(); ++row) {
        out << format_real(s.t[row]) << ',' << to_string(s.tags[row]) << ',' << format_real(s.c[row]) << ','
            << format_real(s.reference.empty() ? kNaN : s.reference[row]);
        for (const auto& col : s.z) {
            out << ',' << format_real(col[row]);
        }
        out << '\n';
    }
}

}  // namespace jumpsde
