// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "jumpsde/noise.hpp"
#include "jumpsde/simulator.hpp"

namespace jumpsde {

/// Denominator floor for relative errors: |z - ref| / max(|ref|, floor).
inline constexpr double kRelativeErrorFloor = 1e-300;

struct EnsembleConfig {
    SdeModel model;
    SimConfig sim;
    double intensity = 10.0;
    AmplitudeDistribution distribution;
    std::size_t n_paths = 1;
    std::uint64_t seed = 0;
    /// Times at which ensemble statistics are gathered; T when empty.
    std::vector<double> checkpoints;
    /// When set, every member is driven by this path instead of a sampled one.
    std::optional<CompoundPoissonPath> fixed_path;
    /// Worker threads; 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;

    /// Throws ValidationError on n_paths == 0, unsorted or out-of-range
    /// checkpoints, or any model/sim/noise invariant.
    void validate() const;
};

/// Driving path of member `index`: fixed_path if set, otherwise
/// sample_path(intensity, T, distribution, substream_seed(seed, index)).
CompoundPoissonPath member_path(const EnsembleConfig& cfg, std::size_t index);

struct PathwiseError {
    double terminal_rel_error = 0.0;
    double max_rel_error = 0.0;
    /// True when some |ref| fell below kRelativeErrorFloor.
    bool floor_hit = false;
};

/// Relative errors of `traj` against `ref` aligned record by record.
/// Throws ValidationError on a length mismatch or empty input.
PathwiseError pathwise_error(const Trajectory& traj, const std::vector<double>& ref);

struct PathResult {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    std::uint64_t path_digest = 0;
    std::size_t jump_count = 0;
    std::size_t tie_adjustments = 0;
    double c_terminal = 0.0;
    double terminal = 0.0;
    // NaN when the model has no reference.
    double terminal_reference = 0.0;
    double terminal_abs_error = 0.0;
    double terminal_rel_error = 0.0;
    double max_rel_error = 0.0;
};

struct CheckpointStats {
    double t = 0.0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased; 0 for a single path
    double std_error = 0.0;
};

enum class ErrorStatistic : std::uint8_t { MeanTerminalRelative, MaxTerminalRelative, MeanTerminalAbsolute };

std::string_view to_string(ErrorStatistic s) noexcept;
ErrorStatistic parse_error_statistic(std::string_view text);

struct ErrorReport {
    std::string label;
    bool has_reference = false;
    bool floor_hit = false;
    std::vector<PathResult> paths;
    std::vector<CheckpointStats> checkpoints;
    // Aggregates over paths; NaN without a reference.
    double mean_terminal_rel_error = 0.0;
    double max_terminal_rel_error = 0.0;
    double mean_terminal_abs_error = 0.0;
    double max_rel_error = 0.0;

    double statistic(ErrorStatistic s) const noexcept;
};

/// Simulate every member and aggregate in path-index order, so the report
/// does not depend on the thread count. Errors are rethrown prefixed with
/// the lowest failing path index.
ErrorReport run_ensemble(const EnsembleConfig& cfg);

enum class ControlKind : std::uint8_t { Dt, Terms, HMax };

std::string_view to_string(ControlKind k) noexcept;
ControlKind parse_control_kind(std::string_view text);

struct ConvergenceRow {
    double control = 0.0;
    double error = 0.0;
    /// NaN on the first row. For dt and h_max: log(e_prev / e) / log(c_prev / c),
    /// which is log2(e_prev / e) for halving. For K: log2(e_prev / e).
    double observed_order = 0.0;
};

struct ConvergenceTable {
    ControlKind control = ControlKind::Dt;
    ErrorStatistic statistic = ErrorStatistic::MeanTerminalRelative;
    std::vector<ConvergenceRow> rows;
};

/// Rerun the ensemble (same seeds) once per control value. K requires a
/// DiPaolaFalsone interpretation and h_max a MarcusOde one. Values must be
/// strictly monotone with at least three entries and the model must carry
/// a reference.
ConvergenceTable convergence_study(const EnsembleConfig& cfg, ControlKind control, const std::vector<double>& values,
                                   ErrorStatistic statistic = ErrorStatistic::MeanTerminalRelative);

/// Records of one path under every interpretation, aligned row by row.
struct ComparisonSeries {
    std::size_t path_index = 0;
    std::vector<double> t;
    std::vector<RecordTag> tags;
    std::vector<double> c;          // C(t-) on pre-jump rows, C(t) otherwise
    std::vector<double> reference;  // empty without a reference
    std::vector<std::vector<double>> z;  // [interpretation][row]
};

struct Comparison {
    std::vector<Interpretation> interpretations;
    std::vector<std::string> labels;
    std::vector<ErrorReport> reports;  // one per interpretation
    std::vector<ComparisonSeries> series;  // first `keep_series` paths
};

/// Every interpretation is driven by the same path for a given index; the
/// path digest stored in each report's PathResult lets callers check this.
Comparison compare_interpretations(const EnsembleConfig& cfg, const std::vector<Interpretation>& interpretations,
                                   std::size_t keep_series = 1);

/// Leading-order relative error of the Marcus ODE scheme for f = alpha x,
/// g = a x, from truncation of the exponential multipliers:
///
///   drift:  sum over steps of C_p |alpha h|^{p+1}
///   jumps:  sum over jumps of n_k C_p |a r_k / n_k|^{p+1}
///
/// with p the scheme order, C_2 = 1/6 (Heun) and C_4 = 1/120 (classic RK4),
/// and n_k = marcus_substeps(r_k, h_max). Step sizes are the actual ones,
/// including partial steps created by jump times.
double linear_model_error_estimate(double alpha, double a, const SimConfig& sim, const CompoundPoissonPath& path);

/// Per-path rows `index,seed,jumps,c_T,z_T,reference_T,abs_error,rel_error,max_rel_error`.
void write_report_csv(std::ostream& out, const ErrorReport& report);
/// Header `control,error,observed_order`.
void write_convergence_csv(std::ostream& out, const ConvergenceTable& table);
/// Header `t,tag,c,reference,<label>...`; reference is `nan` when absent.
void write_comparison_csv(std::ostream& out, const Comparison& cmp, std::size_t series_index = 0);

}  // namespace jumpsde
