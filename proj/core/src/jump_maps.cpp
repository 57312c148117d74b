// SPDX-License-Identifier: Apache-2.0
#include "jumpsde/jump_maps.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "jumpsde/error.hpp"
#include "jumpsde/format.hpp"
#include "jumpsde/jet.hpp"

namespace jumpsde {

std::string_view to_string(RkScheme scheme) noexcept { return scheme == RkScheme::RK2 ? "rk2" : "rk4"; }

RkScheme parse_rk_scheme(std::string_view text) {
    std::string s(trim(text));
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (s == "rk2") {
        return RkScheme::RK2;
    }
    if (s == "rk4") {
        return RkScheme::RK4;
    }
    throw ValidationError("unknown Runge-Kutta scheme '" + s + "' (expected rk2 or rk4)");
}

void validate(const ClosedFormKind& kind) {
    if (const auto* lin = std::get_if<LinearJump>(&kind)) {
        if (!std::isfinite(lin->a) || !std::isfinite(lin->b)) {
            throw ValidationError("linear closed form needs finite coefficients");
        }
        if (lin->a == 0.0) {
            throw ValidationError("linear closed form requires a != 0");
        }
    } else if (!std::isfinite(std::get<ConstantJump>(kind).b)) {
        throw ValidationError("constant closed form needs a finite coefficient");
    }
}

void validate(const JumpScheme& scheme) {
    std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SeriesTruncation>) {
                if (s.terms < 1) {
                    throw ValidationError("K ≥ 1 required for the series truncation");
                }
            } else if constexpr (std::is_same_v<T, OdeSolve>) {
                if (!(s.h_max > 0.0) || !std::isfinite(s.h_max)) {
                    throw ValidationError("h_max > 0 required for the jump ODE");
                }
            } else {
                validate(s.kind);
            }
        },
        scheme);
}

ClosedFormKind parse_closed_form(std::string_view text) {
    text = trim(text);
    const auto open = text.find('(');
    if (open == std::string_view::npos || text.back() != ')') {
        throw ValidationError("closed form must be linear(a,b) or constant(b)");
    }
    const std::string name(trim(text.substr(0, open)));
    const auto args = split_top_level(text.substr(open + 1, text.size() - open - 2), ',');
    ClosedFormKind kind;
    if (name == "linear" && args.size() == 2) {
        kind = LinearJump{parse_real(args[0], "linear a"), parse_real(args[1], "linear b")};
    } else if (name == "constant" && args.size() == 1) {
        kind = ConstantJump{parse_real(args[0], "constant b")};
    } else {
        throw ValidationError("closed form must be linear(a,b) or constant(b), got '" + std::string(text) + "'");
    }
    validate(kind);
    return kind;
}

std::string to_string(const ClosedFormKind& kind) {
    if (const auto* lin = std::get_if<LinearJump>(&kind)) {
        return "linear(" + format_short(lin->a) + "," + format_short(lin->b) + ")";
    }
    return "constant(" + format_short(std::get<ConstantJump>(kind).b) + ")";
}

double ito_jump(const Expr& g, double z, double t, double r) { return eval(g, z, t) * r; }

namespace {

// Taylor coefficients a_1..a_K of the jump-ODE solution (a_0 = 0).
std::vector<double> flow_taylor_coefficients(const Expr& g, double z, double t, unsigned terms) {
    if (terms < 1) {
        throw ValidationError("K ≥ 1 required for the series truncation");
    }
    // outer[m] = (1/m!) d^m g / dx^m at z; only orders < terms are needed.
    const Jet outer = eval_jet(g, z, t, terms - 1);
    std::vector<double> a(terms + 1, 0.0);
    // powers[m][k] = [s^k] y(s)^m, filled column by column as a_k become known.
    std::vector<std::vector<double>> powers(terms, std::vector<double>(terms, 0.0));
    powers[0][0] = 1.0;
    for (unsigned k = 0; k < terms; ++k) {
        // y^m has no terms below degree m; column k of y^m uses a_1..a_{k-m+1}.
        for (unsigned m = 1; m <= k; ++m) {
            double s = 0.0;
            for (unsigned i = 1; i + (m - 1) <= k; ++i) {
                s += a[i] * powers[m - 1][k - i];
            }
            powers[m][k] = s;
        }
        double h = outer[0] * powers[0][k];
        for (unsigned m = 1; m <= k; ++m) {
            h += outer[m] * powers[m][k];
        }
        a[k + 1] = h / static_cast<double>(k + 1);
        if (!std::isfinite(a[k + 1])) {
            throw DomainError("non-finite series coefficient of order " + std::to_string(k + 1));
        }
    }
    a.erase(a.begin());
    return a;
}

}  // namespace

std::vector<double> df_coefficients(const Expr& g, double z, double t, unsigned terms) {
    std::vector<double> coeffs = flow_taylor_coefficients(g, z, t, terms);
    double factorial = 1.0;
    for (unsigned j = 1; j <= terms; ++j) {
        factorial *= j;
        coeffs[j - 1] *= factorial;
    }
    return coeffs;
}

double df_series_jump(const Expr& g, double z, double t, double r, unsigned terms) {
    const std::vector<double> a = flow_taylor_coefficients(g, z, t, terms);
    double acc = a.back();
    for (std::size_t j = a.size() - 1; j-- > 0;) {
        acc = a[j] + r * acc;
    }
    return r * acc;
}

std::size_t marcus_substeps(double r, double h_max) {
    if (!(h_max > 0.0)) {
        throw ValidationError("h_max > 0 required for the jump ODE");
    }
    const double n = std::ceil(std::fabs(r) / h_max);
    return n < 1.0 ? 1 : static_cast<std::size_t>(n);
}

double marcus_jump(const Expr& g, double z, double t, double r, RkScheme scheme, double h_max) {
    if (!std::isfinite(r) || !std::isfinite(z)) {
        throw ValidationError("jump amplitude and state must be finite");
    }
    const std::size_t n = marcus_substeps(r, h_max);
    if (r == 0.0) {
        return 0.0;
    }
    if (!g.references(Variable::X)) {
        return eval(g, z, t) * r;
    }
    const double h = r / static_cast<double>(n);
    const auto rhs = [&](double, double y) { return eval(g, z + y, t); };
    double y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        try {
            y = rk_step(scheme, rhs, static_cast<double>(i) * h, y, h);
        } catch (const DomainError& err) {
            throw DomainError("jump ODE substep " + std::to_string(i) + " of " + std::to_string(n) + ": " +
                              err.what());
        }
        if (!std::isfinite(y)) {
            throw NonFiniteError("jump ODE state overflowed at substep " + std::to_string(i) + " of " +
                                 std::to_string(n));
        }
    }
    return y;
}

double closed_form_jump(const ClosedFormKind& kind, double z, double r) {
    validate(kind);
    if (const auto* lin = std::get_if<LinearJump>(&kind)) {
        return (z + lin->b / lin->a) * std::expm1(lin->a * r);
    }
    return std::get<ConstantJump>(kind).b * r;
}

double apply_jump(const JumpScheme& scheme, const Expr& g, double z, double t, double r) {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SeriesTruncation>) {
                return df_series_jump(g, z, t, r, s.terms);
            } else if constexpr (std::is_same_v<T, OdeSolve>) {
                return marcus_jump(g, z, t, r, s.scheme, s.h_max);
            } else {
                return closed_form_jump(s.kind, z, r);
            }
        },
        scheme);
}

}  // namespace jumpsde
