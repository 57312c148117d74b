// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "jumpsde/expr.hpp"
#include "jumpsde/jump_maps.hpp"
#include "jumpsde/noise.hpp"
#include "jumpsde/runge_kutta.hpp"

namespace jumpsde {

/// dZ = f(Z, t) dt + g(Z, t) dC(t) with Z(0) = z0.
struct SdeModel {
    Expr f;
    Expr g;
    double z0 = 1.0;
    /// Exact solution as a function of t and c = C(t), when known.
    std::optional<Expr> reference;

    /// Throws ValidationError if f or g reference c, if the reference
    /// references x, or if z0 is not finite.
    void validate() const;
};

/// Jump contributes g(Z(t-), t) R_k.
struct Ito {};
using DiPaolaFalsone = SeriesTruncation;
using MarcusOde = OdeSolve;
using MarcusClosedForm = ClosedForm;

using Interpretation = std::variant<Ito, DiPaolaFalsone, MarcusOde, MarcusClosedForm>;

void validate(const Interpretation& interp);

/// Short label used in file names and column headers:
/// `ito`, `df6`, `marcus_rk2_h0.1`, `closed_linear_1_0`, `closed_constant_2`.
std::string label(const Interpretation& interp);

/// Increment applied at a jump of size r from state z at time t.
double jump_increment(const Interpretation& interp, const Expr& g, double z, double t, double r);

struct SimConfig {
    double dt = 0.01;
    RkScheme drift_scheme = RkScheme::RK2;
    double horizon = 1.0;
    Interpretation interpretation = MarcusOde{};
    /// Extra times in [0, T] where the integrator lands exactly and records a
    /// grid point (checkpoints). Need not be sorted.
    std::vector<double> stops;

    /// Throws ValidationError unless 0 < dt <= T and stops lie in [0, T].
    void validate() const;
};

enum class RecordTag : std::uint8_t { Grid, PreJump, PostJump };

std::string_view to_string(RecordTag tag) noexcept;
RecordTag parse_record_tag(std::string_view text);

struct TrajectoryRecord {
    double t;
    double z;
    RecordTag tag;
};

struct JumpAudit {
    std::size_t index;  // position in the path's jump list
    double t;
    double r;
    double z_pre;
    double increment;  // z_post == z_pre + increment
};

/// Records in time order. Every jump contributes a PreJump and a PostJump
/// record sharing the jump time; the first record is (0, z0, Grid). The
/// output grid is the union of {i dt} ∪ {T} ∪ stops ∪ jump times.
struct Trajectory {
    std::vector<TrajectoryRecord> records;
    std::vector<JumpAudit> jumps;

    double terminal() const { return records.back().z; }
    /// Post-jump state at t (or the grid state there); throws ValidationError
    /// if no record has time t.
    double state_at(double t) const;
};

/// One explicit Runge-Kutta step of dz/dt = f(z, t).
double drift_step(const Expr& f, double z, double t, double dt, RkScheme scheme);

/// Uniform grid 0, dt, 2dt, ... up to T. If T is within 1e-9 dt of a
/// multiple of dt that multiple is replaced by T; otherwise T is appended
/// as a final partial step.
std::vector<double> uniform_grid(double dt, double horizon);

/// Integrate one path. Throws ValidationError if config.horizon differs
/// from path.horizon(); jump-map and evaluation errors are rethrown with the
/// jump index and time prepended.
Trajectory simulate_path(const SdeModel& model, const CompoundPoissonPath& path, const SimConfig& config);

/// model.reference at (t, C(t)) for each time (post-jump convention).
/// Throws ValidationError if the model has no reference.
std::vector<double> reference_path(const SdeModel& model, const CompoundPoissonPath& path,
                                   const std::vector<double>& times);

/// Reference aligned record by record with a trajectory: PreJump records
/// use C(t-), all others C(t).
std::vector<double> reference_for(const SdeModel& model, const CompoundPoissonPath& path, const Trajectory& traj);

/// CSV with header `t,z,tag`, reals written with 17 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
/// Records only (no audit entries). Throws ValidationError with a line number.
Trajectory read_trajectory_csv(std::istream& in);

}  // namespace jumpsde
