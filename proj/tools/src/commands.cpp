// SPDX-License-Identifier: Apache-2.0
#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "jumpsde/error.hpp"
#include "jumpsde/format.hpp"
#include "svg.hpp"

namespace jumpsde::cli {

namespace {

using Json = nlohmann::ordered_json;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

class Writer {
public:
    Writer(const RunSpec& spec, CommandResult& result) : dir_(spec.output.directory), result_(result) {
        std::filesystem::create_directories(dir_);
    }

    void file(const std::string& name, const std::string& content) {
        const auto path = dir_ / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << content;
        out.close();
        if (!out) {
            throw std::runtime_error("cannot write '" + path.string() + "'");
        }
        result_.files.push_back(path);
    }

    template <class Fn>
    void stream(const std::string& name, Fn&& fn) {
        std::ostringstream buf;
        fn(buf);
        file(name, buf.str());
    }

private:
    std::filesystem::path dir_;
    CommandResult& result_;
};

std::string hex(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

Json settings_json(const RunSpec& spec) {
    Json out = Json::object();
    for (const auto& [k, v] : spec.settings) {
        out[k] = v;
    }
    return out;
}

Json path_json(const CompoundPoissonPath& path) {
    return Json{{"seed", path.seed()},
                {"jumps", path.size()},
                {"tie_adjustments", path.tie_adjustments()},
                {"c_T", path.c_value(path.horizon())},
                {"digest", hex(path.digest())}};
}

Json report_json(const ErrorReport& r) {
    Json cps = Json::array();
    for (const auto& c : r.checkpoints) {
        cps.push_back(Json{{"t", c.t}, {"mean", c.mean}, {"variance", c.variance}, {"std_error", c.std_error}});
    }
    return Json{{"label", r.label},
                {"has_reference", r.has_reference},
                {"floor_hit", r.floor_hit},
                {"n_paths", r.paths.size()},
                {"mean_terminal_rel_error", r.mean_terminal_rel_error},
                {"max_terminal_rel_error", r.max_terminal_rel_error},
                {"mean_terminal_abs_error", r.mean_terminal_abs_error},
                {"max_rel_error", r.max_rel_error},
                {"checkpoints", cps}};
}

std::size_t tie_total(const ErrorReport& r) {
    std::size_t n = 0;
    for (const auto& p : r.paths) {
        n += p.tie_adjustments;
    }
    return n;
}

void warn_ties(CommandResult& result, std::size_t ties) {
    if (ties > 0) {
        result.warnings.push_back(std::to_string(ties) +
                                  " tied jump time(s) were separated by one ulp; results remain reproducible");
    }
}

Plot noise_plot(const CompoundPoissonPath& path) {
    PlotSeries s{"C(t)", kPalette[0], {0.0}, {0.0}, false};
    double c = 0.0;
    for (std::size_t k = 0; k < path.size(); ++k) {
        const double t = path.jump_times()[k];
        s.x.push_back(t);
        s.y.push_back(c);
        c = path.c_value(t);
        s.x.push_back(t);
        s.y.push_back(c);
    }
    s.x.push_back(path.horizon());
    s.y.push_back(c);
    return Plot{"Driving compound Poisson path", "t", "C(t)", {s}, {}};
}

Plot comparison_plot(const Comparison& cmp, const CompoundPoissonPath& path) {
    const ComparisonSeries& s = cmp.series.at(0);
    Plot plot{"Numerical solutions vs reference", "t", "Z(t)", {}, path.jump_times()};
    if (!s.reference.empty()) {
        plot.series.push_back(PlotSeries{"reference", "#000000", s.t, s.reference, true});
    }
    for (std::size_t j = 0; j < cmp.labels.size(); ++j) {
        plot.series.push_back(PlotSeries{cmp.labels[j], kPalette[j % std::size(kPalette)], s.t, s.z[j], false});
    }
    return plot;
}

Json base_summary(Command command, const RunSpec& spec) {
    return Json{{"command", std::string(to_string(command))}, {"settings", settings_json(spec)}};
}

void finish(Writer& w, Json& summary, const CommandResult& result) {
    Json files = Json::array();
    for (const auto& f : result.files) {
        files.push_back(f.filename().string());
    }
    files.push_back("summary.json");
    summary["files"] = files;
    w.file("summary.json", summary.dump(2) + "\n");
}

CommandResult sample_noise(const RunSpec& spec) {
    CommandResult result;
    Writer w(spec, result);
    const CompoundPoissonPath path = member_path(spec.ensemble(), 0);
    w.stream("path.csv", [&](std::ostream& o) { write_path_csv(o, path); });
    if (spec.output.plot) {
        w.file("fig1.svg", render_svg(noise_plot(path)));
    }
    warn_ties(result, path.tie_adjustments());
    Json summary = base_summary(Command::SampleNoise, spec);
    summary["path"] = path_json(path);
    finish(w, summary, result);
    return result;
}

CommandResult simulate(const RunSpec& spec) {
    CommandResult result;
    Writer w(spec, result);
    const EnsembleConfig cfg = spec.ensemble();
    const CompoundPoissonPath path = member_path(cfg, 0);
    SimConfig sim = spec.sim;
    sim.stops = spec.checkpoints;
    const Trajectory traj = simulate_path(spec.model, path, sim);
    const std::string lbl = label(sim.interpretation);

    w.stream("path.csv", [&](std::ostream& o) { write_path_csv(o, path); });
    w.stream("trajectory_" + lbl + ".csv", [&](std::ostream& o) { write_trajectory_csv(o, traj); });
    if (spec.output.plot) {
        w.file("fig1.svg", render_svg(noise_plot(path)));
    }
    warn_ties(result, path.tie_adjustments());

    Json summary = base_summary(Command::Simulate, spec);
    summary["path"] = path_json(path);
    Json t{{"label", lbl}, {"records", traj.records.size()}, {"terminal", traj.terminal()}};
    if (spec.model.reference) {
        const auto ref = reference_for(spec.model, path, traj);
        const auto err = pathwise_error(traj, ref);
        t["terminal_reference"] = ref.back();
        t["terminal_rel_error"] = err.terminal_rel_error;
        t["max_rel_error"] = err.max_rel_error;
        t["floor_hit"] = err.floor_hit;
    }
    summary["trajectory"] = t;
    finish(w, summary, result);
    return result;
}

CommandResult compare(const RunSpec& spec) {
    CommandResult result;
    Writer w(spec, result);
    const EnsembleConfig cfg = spec.ensemble();
    const Comparison cmp = compare_interpretations(cfg, spec.interpretations, 1);
    const CompoundPoissonPath path = member_path(cfg, 0);

    w.stream("path.csv", [&](std::ostream& o) { write_path_csv(o, path); });
    w.stream("compare.csv", [&](std::ostream& o) { write_comparison_csv(o, cmp, 0); });
    if (spec.output.plot) {
        w.file("fig1.svg", render_svg(noise_plot(path)));
        w.file("fig2.svg", render_svg(comparison_plot(cmp, path)));
    }
    warn_ties(result, tie_total(cmp.reports.front()));

    Json summary = base_summary(Command::Compare, spec);
    summary["path"] = path_json(path);
    Json reports = Json::array();
    for (const auto& r : cmp.reports) {
        reports.push_back(report_json(r));
    }
    summary["reports"] = reports;
    finish(w, summary, result);
    return result;
}

CommandResult converge(const RunSpec& spec) {
    CommandResult result;
    Writer w(spec, result);
    const ConvergenceTable table = convergence_study(spec.ensemble(), spec.control, spec.values, spec.statistic);
    w.stream("convergence.csv", [&](std::ostream& o) { write_convergence_csv(o, table); });

    Json summary = base_summary(Command::Converge, spec);
    Json rows = Json::array();
    for (const auto& r : table.rows) {
        rows.push_back(Json{{"control", r.control}, {"error", r.error}, {"observed_order", r.observed_order}});
    }
    summary["convergence"] = Json{{"control", std::string(to_string(table.control))},
                                  {"statistic", std::string(to_string(table.statistic))},
                                  {"rows", rows}};
    finish(w, summary, result);
    return result;
}

CommandResult ensemble(const RunSpec& spec) {
    CommandResult result;
    Writer w(spec, result);
    const ErrorReport report = run_ensemble(spec.ensemble());
    w.stream("ensemble.csv", [&](std::ostream& o) { write_report_csv(o, report); });
    warn_ties(result, tie_total(report));

    Json summary = base_summary(Command::Ensemble, spec);
    summary["report"] = report_json(report);
    finish(w, summary, result);
    return result;
}

}  // namespace

std::string_view to_string(Command c) noexcept {
    switch (c) {
        case Command::SampleNoise: return "sample-noise";
        case Command::Simulate: return "simulate";
        case Command::Compare: return "compare";
        case Command::Converge: return "converge";
        case Command::Ensemble: return "ensemble";
    }
    return "?";
}

CommandResult run_command(Command command, const RunSpec& spec) {
    switch (command) {
        case Command::SampleNoise: return sample_noise(spec);
        case Command::Simulate: return simulate(spec);
        case Command::Compare: return compare(spec);
        case Command::Converge: return converge(spec);
        case Command::Ensemble: return ensemble(spec);
    }
    return {};
}

int exit_code_for(const std::exception& err) noexcept {
    if (dynamic_cast<const ValidationError*>(&err) != nullptr || dynamic_cast<const ParseError*>(&err) != nullptr) {
        return 1;
    }
    return 2;
}

}  // namespace jumpsde::cli
