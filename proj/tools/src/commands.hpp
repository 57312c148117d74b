// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <exception>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "run_spec.hpp"

namespace jumpsde::cli {

enum class Command { SampleNoise, Simulate, Compare, Converge, Ensemble };

std::string_view to_string(Command c) noexcept;

struct CommandResult {
    std::vector<std::filesystem::path> files;
    std::vector<std::string> warnings;
};

/// Runs the subcommand and writes its files under spec.output.directory
/// (created if needed):
///
///   sample-noise  path.csv, summary.json, fig1.svg
///   simulate      path.csv, trajectory_<label>.csv, summary.json, fig1.svg
///   compare       path.csv, compare.csv, summary.json, fig1.svg, fig2.svg
///   converge      convergence.csv, summary.json
///   ensemble      ensemble.csv, summary.json
///
/// Figures are skipped when output.plot is off. Library errors propagate.
CommandResult run_command(Command command, const RunSpec& spec);

/// 1 for validation and parse errors, 2 for numeric failures (domain,
/// non-smooth, non-finite) and anything else.
int exit_code_for(const std::exception& err) noexcept;

}  // namespace jumpsde::cli
