// SPDX-License-Identifier: Apache-2.0
// jumpsde: command-line front end for the jump SDE library.
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "jumpsde/error.hpp"
#include "run_spec.hpp"

using namespace jumpsde::cli;

namespace {

const char* const kKeysHelp = R"(Config file (key = value, '#' comments, optional [section] headers):
  [model]    f, g              drift and jump coefficient in x and t (required)
             z0                initial state (1)
             reference         exact solution in t and c, optional
  [noise]    intensity         Poisson arrivals per unit time (10)
             distribution      normal(m,s) | constant(v) | exponential(rate) | uniform(lo,hi)  (normal(0,1))
             seed              master seed, 64-bit (0)
  [sim]      T                 horizon (1)
             dt                drift step (0.01)
             drift_scheme      rk2 | rk4 (rk2)
             interpretation    ito | df | marcus | closed, or df(K), marcus(rk4,h), closed(linear(a,b))  (marcus)
             K                 series terms for df (6)
             h_max             jump ODE step for marcus (0.1)
             jump_scheme       rk2 | rk4 for marcus (rk2)
             closed_form       linear(a,b) | constant(b) for closed
  [harness]  n_paths           ensemble size (1)
             checkpoints       comma-separated times for ensemble statistics (T)
             threads           worker threads, 0 = all cores (0)
             interpretations   list for compare (marcus, df)
             control           dt | K | h_max for converge (dt)
             values            comma-separated control values (halving ladder)
             statistic         mean_terminal_rel | max_terminal_rel | mean_terminal_abs
  [output]   directory         output directory ($JUMPSDE_OUTPUT_DIR, else jumpsde_out)
             plot              on | off: write fig1.svg / fig2.svg (on)

Exit status: 0 success, 1 invalid input, 2 numeric failure.)";

struct Flags {
    std::string config;
    std::optional<std::string> seed;
    std::optional<std::string> dt;
    std::optional<std::string> paths;
    std::optional<std::string> interp;
    std::optional<std::string> out;
    std::vector<std::string> sets;
};

std::vector<Override> overrides(const Flags& f) {
    std::vector<Override> out;
    if (f.seed) {
        out.push_back({"noise.seed", *f.seed, "--seed"});
    }
    if (f.dt) {
        out.push_back({"sim.dt", *f.dt, "--dt"});
    }
    if (f.paths) {
        out.push_back({"harness.n_paths", *f.paths, "--paths"});
    }
    if (f.interp) {
        out.push_back({"sim.interpretation", *f.interp, "--interp"});
    }
    if (f.out) {
        out.push_back({"output.directory", *f.out, "--out"});
    }
    for (const auto& s : f.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw jumpsde::ValidationError("--set " + s + ": expected key=value");
        }
        out.push_back({s.substr(0, eq), s.substr(eq + 1), "--set " + s.substr(0, eq)});
    }
    return out;
}

void add_flags(CLI::App& sub, Flags& f) {
    sub.add_option("config", f.config, "configuration file")->required();
    sub.add_option("--seed", f.seed, "override noise.seed");
    sub.add_option("--dt", f.dt, "override sim.dt");
    sub.add_option("--paths", f.paths, "override harness.n_paths");
    sub.add_option("--interp", f.interp, "override sim.interpretation");
    sub.add_option("--out", f.out, "override output.directory");
    sub.add_option("--set", f.sets, "override any key: --set section.key=value (repeatable)");
    sub.footer(kKeysHelp);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulate scalar SDEs driven by compound Poisson noise under Ito, series and jump-ODE interpretations"};
    app.require_subcommand(1);
    app.footer(kKeysHelp);

    struct Sub {
        Command command;
        const char* help;
    };
    const Sub subs[] = {
        {Command::SampleNoise, "sample the driving path of member 0 -> path.csv"},
        {Command::Simulate, "integrate member 0 under sim.interpretation -> trajectory_<label>.csv"},
        {Command::Compare, "run every harness.interpretations on shared paths -> compare.csv"},
        {Command::Converge, "error table over harness.values of harness.control -> convergence.csv"},
        {Command::Ensemble, "ensemble statistics and per-path errors -> ensemble.csv"},
    };
    Flags flags;
    std::optional<Command> chosen;
    for (const auto& s : subs) {
        CLI::App* sub = app.add_subcommand(std::string(to_string(s.command)), s.help);
        add_flags(*sub, flags);
        sub->callback([&chosen, c = s.command] { chosen = c; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        const RunSpec spec = load_spec(flags.config, overrides(flags));
        const CommandResult result = run_command(*chosen, spec);
        for (const auto& w : result.warnings) {
            std::cerr << "warning: " << w << '\n';
        }
        for (const auto& f : result.files) {
            std::cout << f.string() << '\n';
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
}
