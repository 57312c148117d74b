// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string_view>

namespace jumpsde {

/// Explicit fixed-step schemes.
///
/// RK2 is Heun's method (explicit trapezoidal rule):
///     0 |
///     1 | 1
///     --+---------
///       | 1/2 1/2
/// RK4 is the classic four-stage method with weights 1/6, 1/3, 1/3, 1/6.
enum class RkScheme : std::uint8_t { RK2, RK4 };

std::string_view to_string(RkScheme scheme) noexcept;
/// Accepts "rk2" / "rk4" (case-insensitive); throws ValidationError.
RkScheme parse_rk_scheme(std::string_view text);

/// Theoretical global order of accuracy.
constexpr int rk_order(RkScheme scheme) noexcept { return scheme == RkScheme::RK2 ? 2 : 4; }

/// One step of size h for y' = rhs(s, y).
template <class Rhs>
double rk_step(RkScheme scheme, const Rhs& rhs, double s, double y, double h) {
    if (scheme == RkScheme::RK2) {
        const double k1 = rhs(s, y);
        const double k2 = rhs(s + h, y + h * k1);
        return y + h * (k1 + k2) / 2.0;
    }
    const double half = h / 2.0;
    const double k1 = rhs(s, y);
    const double k2 = rhs(s + half, y + half * k1);
    const double k3 = rhs(s + half, y + half * k2);
    const double k4 = rhs(s + h, y + h * k3);
    return y + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
}

}  // namespace jumpsde
