// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "jumpsde/expr.hpp"
#include "jumpsde/runge_kutta.hpp"

namespace jumpsde {

/// g(x) = a x + b with a != 0.
struct LinearJump {
    double a = 1.0;
    double b = 0.0;
};

/// g(x) = b.
struct ConstantJump {
    double b = 0.0;
};

using ClosedFormKind = std::variant<LinearJump, ConstantJump>;

/// Keep the first `terms` terms of the jump series.
struct SeriesTruncation {
    unsigned terms = 6;
};

/// Integrate the jump ODE with equal substeps no longer than h_max.
struct OdeSolve {
    RkScheme scheme = RkScheme::RK2;
    double h_max = 0.1;
};

struct ClosedForm {
    ClosedFormKind kind;
};

using JumpScheme = std::variant<SeriesTruncation, OdeSolve, ClosedForm>;

/// Throws ValidationError on terms == 0, h_max <= 0 or a linear kind with a == 0.
void validate(const JumpScheme& scheme);
void validate(const ClosedFormKind& kind);

/// `linear(a,b)` or `constant(b)`; throws ValidationError.
ClosedFormKind parse_closed_form(std::string_view text);
std::string to_string(const ClosedFormKind& kind);

/// Increment g(z, t) * r with no correction.
double ito_jump(const Expr& g, double z, double t, double r);

/// [g^(1), ..., g^(K)] at (z, t) for the recursion g^(1) = g,
/// g^(j) = g * d/dx g^(j-1).
///
/// Obtained without symbolic differentiation. The solution y(s) of
/// dy/ds = g(z + y, t), y(0) = 0 has Taylor coefficients a_j = g^(j) / j!,
/// and they satisfy (k + 1) a_{k+1} = [s^k] g(z + y(s), t). The right side is
/// the composition of the x-jet of g at z with the partial series of y, so
/// the a_j are filled in one order at a time at O(K^3) total cost.
///
/// Throws NonSmoothError where g has no jet (piecewise breakpoints).
std::vector<double> df_coefficients(const Expr& g, double z, double t, unsigned terms);

/// Partial sum sum_{j=1..K} g^(j)(z,t) r^j / j!, evaluated by Horner's rule.
/// With K = 1 the result equals ito_jump bit for bit.
double df_series_jump(const Expr& g, double z, double t, double r, unsigned terms);

/// Number of equal substeps used by marcus_jump: max(1, ceil(|r| / h_max)).
std::size_t marcus_substeps(double r, double h_max);

/// y(r) for dy/ds = g(z + y(s), t), y(0) = 0, integrated from 0 to r
/// (signed) with marcus_substeps(r, h_max) steps of `scheme`. When g does
/// not depend on x the flow is exactly g r and is returned directly.
///
/// Throws DomainError naming the substep, or NonFiniteError if y overflows.
double marcus_jump(const Expr& g, double z, double t, double r, RkScheme scheme, double h_max);

/// Exact jump flow: linear (z + b/a)(e^{a r} - 1), constant b r.
double closed_form_jump(const ClosedFormKind& kind, double z, double r);

/// Dispatch on `scheme`. ClosedForm ignores g.
double apply_jump(const JumpScheme& scheme, const Expr& g, double z, double t, double r);

}  // namespace jumpsde
