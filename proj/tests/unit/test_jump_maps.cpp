// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "jumpsde/error.hpp"
#include "jumpsde/jump_maps.hpp"
#include "oracles.hpp"

using namespace jumpsde;

namespace {

// Polynomial oracle for the recursion g^(1) = g, g^(j) = g * d/dx g^(j-1),
// carried out symbolically on coefficient vectors (index = power of x).
using Poly = std::vector<double>;

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

Poly poly_derivative(const Poly& a) {
    if (a.size() == 1) {
        return {0.0};
    }
    Poly out(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) {
        out[i - 1] = static_cast<double>(i) * a[i];
    }
    return out;
}

double poly_eval(const Poly& a, double x) {
    double acc = 0;
    for (auto it = a.rbegin(); it != a.rend(); ++it) {
        acc = acc * x + *it;
    }
    return acc;
}

std::vector<double> recursion_oracle(const Poly& g, double z, unsigned terms) {
    std::vector<double> out;
    Poly current = g;
    for (unsigned j = 1; j <= terms; ++j) {
        out.push_back(poly_eval(current, z));
        current = poly_mul(g, poly_derivative(current));
    }
    return out;
}

}  // namespace

TEST_CASE("ito_jump examples") {
    CHECK(ito_jump(parse("x"), 3, 0, 0.5) == 1.5);
    CHECK(ito_jump(parse("x"), 3, 0, 0.0) == 0.0);
    CHECK(ito_jump(parse("2"), -17, 0, 1.25) == 2.5);
}

TEST_CASE("df_coefficients examples") {
    CHECK(df_coefficients(parse("x"), 2, 0, 4) == std::vector<double>{2, 2, 2, 2});
    CHECK(df_coefficients(parse("3"), 0, 0, 3) == std::vector<double>{3, 0, 0});
    const auto sq = df_coefficients(parse("x^2"), 1, 0, 3);
    CHECK(sq[0] == 1);
    CHECK(sq[1] == doctest::Approx(2).epsilon(1e-15));
    CHECK(sq[2] == doctest::Approx(6).epsilon(1e-15));
}

TEST_CASE("df_coefficients agrees with the symbolic recursion for polynomials") {
    struct Case {
        const char* src;
        Poly poly;
    };
    const Case cases[] = {
        {"x^2", {0, 0, 1}},
        {"0.5*x + 1", {1, 0.5}},
        {"x^3 - x", {0, -1, 0, 1}},
        {"2 - 0.3*x + 0.1*x^2", {2, -0.3, 0.1}},
    };
    for (const auto& c : cases) {
        for (double z : {-0.7, 0.2, 1.3}) {
            const auto got = df_coefficients(parse(c.src), z, 0, 8);
            const auto want = recursion_oracle(c.poly, z, 8);
            for (std::size_t j = 0; j < want.size(); ++j) {
                INFO(c.src << " z=" << z << " j=" << j + 1);
                CHECK(got[j] == doctest::Approx(want[j]).epsilon(1e-12).scale(1.0));
            }
        }
    }
}

TEST_CASE("df_coefficients for sin matches hand recursion") {
    // g = sin: g2 = sin cos, g3 = sin (cos^2 - sin^2).
    const double z = 0.8;
    const auto got = df_coefficients(parse("sin(x)"), z, 0, 3);
    CHECK(got[0] == doctest::Approx(std::sin(z)).epsilon(1e-15));
    CHECK(got[1] == doctest::Approx(std::sin(z) * std::cos(z)).epsilon(1e-14));
    CHECK(got[2] == doctest::Approx(std::sin(z) * (std::cos(z) * std::cos(z) - std::sin(z) * std::sin(z))).epsilon(1e-13));
}

TEST_CASE("df_series_jump examples") {
    const Expr g = parse("x");
    CHECK(df_series_jump(g, 1, 0, 3, 6) == doctest::Approx(18.4125).epsilon(1e-14));
    CHECK(df_series_jump(g, 1, 0, 3, 6) == doctest::Approx(test::exp_series_jump(1, 3, 6)).epsilon(1e-14));
    CHECK(std::fabs(df_series_jump(g, 1, 0, 3, 30) - 19.085537) < 5e-7);
    CHECK(std::fabs(df_series_jump(g, 1, 0, 3, 30) - std::expm1(3.0)) < 1e-12);
    for (const char* src : {"x", "x^2", "sin(x)", "3"}) {
        CHECK(df_series_jump(parse(src), 0.4, 0, 0.0, 7) == 0.0);
    }
    CHECK_THROWS_AS(df_series_jump(g, 1, 0, 1, 0), ValidationError);
}

TEST_CASE("marcus_jump examples") {
    CHECK(std::fabs(marcus_jump(parse("x"), 1, 0, std::numbers::ln2, RkScheme::RK4, 0.01) - 1.0) <= 1e-9);
    CHECK(marcus_jump(parse("2"), 5, 0, 1.5, RkScheme::RK2, 0.1) == 3.0);
    CHECK(marcus_jump(parse("2"), -4, 0, 1.5, RkScheme::RK4, 0.07) == 3.0);
    CHECK(marcus_jump(parse("x"), 1, 0, 0.0, RkScheme::RK4, 0.1) == 0.0);
    // Signed parameter: integrate from 0 down to r.
    CHECK(marcus_jump(parse("x"), 2, 0, -1.0, RkScheme::RK4, 1e-3) ==
          doctest::Approx(2 * std::expm1(-1.0)).epsilon(1e-12));
    CHECK(marcus_substeps(std::numbers::ln2, 0.01) == 70);
    CHECK(marcus_substeps(0.0, 0.1) == 1);
    CHECK(marcus_substeps(-3.0, 0.1) == 30);
}

TEST_CASE("marcus_jump errors name the substep") {
    try {
        // dy/ds = -1 drives x = 1 + y through 0 where ln(x) is undefined.
        marcus_jump(parse("0*ln(x) - 1"), 1, 0, 2.0, RkScheme::RK2, 0.1);
        FAIL("no error");
    } catch (const DomainError& err) {
        CHECK(std::string(err.what()).find("substep") != std::string::npos);
    }
    // dy/ds = (1 + y)^2 blows up at s = 1.
    CHECK_THROWS_AS(marcus_jump(parse("x^2"), 1, 0, 3.0, RkScheme::RK4, 0.001), Error);
    CHECK_THROWS_AS(marcus_jump(parse("x"), 1, 0, 1.0, RkScheme::RK4, 0.0), ValidationError);
}

TEST_CASE("closed_form_jump examples") {
    CHECK(closed_form_jump(LinearJump{1, 0}, 1, std::numbers::ln2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(closed_form_jump(ConstantJump{2}, 7, 1.5) == 3.0);
    CHECK(std::fabs(closed_form_jump(LinearJump{1, 0}, 1, 3) - 19.085537) < 5e-7);
    CHECK(closed_form_jump(LinearJump{0.5, 1}, 0.2, 1.0) == doctest::Approx(2.2 * std::expm1(0.5)).epsilon(1e-15));
    CHECK_THROWS_AS(closed_form_jump(LinearJump{0, 1}, 1, 1), ValidationError);
    CHECK(to_string(parse_closed_form("linear(1, 0)")) == "linear(1,0)");
    CHECK(to_string(parse_closed_form("constant(2.5)")) == "constant(2.5)");
    CHECK_THROWS_AS(parse_closed_form("linear(0,1)"), ValidationError);
    CHECK_THROWS_AS(parse_closed_form("quadratic(1)"), ValidationError);
}

// Expansion points are chosen so that the radius of convergence of the
// series in r is well beyond 1 (for sin: about 4.9 at z = 0.02).
TEST_CASE("series and jump ODE agree for analytic g") {
    struct Case {
        const char* src;
        double z;
    };
    const Case cases[] = {{"x", 1.0},        {"x", -0.6},        {"x^2", 0.2},       {"x^2", -0.1},
                          {"sin(x)", 0.02},  {"0.5*x + 1", 0.4}, {"0.5*x + 1", -3}, {"3", 1.0}};
    for (const auto& c : cases) {
        const Expr g = parse(c.src);
        for (double r : {-1.0, -0.5, 0.25, 0.75, 1.0}) {
            const double ode = marcus_jump(g, c.z, 0, r, RkScheme::RK4, 1e-3);
            INFO(c.src << " z=" << c.z << " r=" << r);
            CHECK(std::fabs(df_series_jump(g, c.z, 0, r, 12) - ode) <= 1e-8);
            double prev = INFINITY;
            for (unsigned k = 1; k <= 12; ++k) {
                const double gap = std::fabs(df_series_jump(g, c.z, 0, r, k) - ode);
                CHECK(gap <= prev + 1e-12);
                prev = gap;
            }
        }
    }
}

TEST_CASE("twelve series terms fall short when the radius of convergence is small") {
    // dy/ds = sin(0.5 + y): singularities at |s| ~ 2.08, so the K = 12 tail at
    // r = 1 is still ~1e-5 while the ODE route converges.
    const Expr g = parse("sin(x)");
    const double ode = marcus_jump(g, 0.5, 0, 1.0, RkScheme::RK4, 1e-3);
    const double ode_fine = marcus_jump(g, 0.5, 0, 1.0, RkScheme::RK4, 5e-4);
    CHECK(std::fabs(ode - ode_fine) < 1e-12);
    CHECK(std::fabs(df_series_jump(g, 0.5, 0, 1.0, 12) - ode) > 1e-6);
    CHECK(std::fabs(df_series_jump(g, 0.5, 0, 1.0, 40) - ode) < 1e-8);
}

TEST_CASE("first series term is the Ito product") {
    for (const char* src : {"x", "x^2", "sin(x)*exp(t)", "0.5*x + 1", "3", "sqrt(x + 2)"}) {
        const Expr g = parse(src);
        for (double z : {-0.9, 0.3, 1.7}) {
            for (double r : {-2.0, 0.1, 3.0}) {
                CHECK(df_series_jump(g, z, 0.4, r, 1) == ito_jump(g, z, 0.4, r));
            }
        }
    }
}

TEST_CASE("constant g collapses every interpretation") {
    const Expr g = parse("3");
    for (double r : {-2.5, -0.1, 0.0, 0.3, 4.0}) {
        const double ito = ito_jump(g, 1.0, 0, r);
        for (unsigned k = 1; k <= 10; ++k) {
            CHECK(df_series_jump(g, 1.0, 0, r, k) == ito);
        }
        CHECK(marcus_jump(g, 1.0, 0, r, RkScheme::RK2, 0.1) == ito);
        CHECK(marcus_jump(g, 1.0, 0, r, RkScheme::RK4, 0.013) == ito);
        CHECK(closed_form_jump(ConstantJump{3}, 1.0, r) == ito);
    }
}

TEST_CASE("jump ODE flow composes") {
    for (const char* src : {"x", "sin(x)", "0.5*x + 1", "x^2"}) {
        const Expr g = parse(src);
        const double z = 0.3;
        for (auto scheme : {RkScheme::RK2, RkScheme::RK4}) {
            const double h = 0.01;
            const double r1 = 0.37;
            const double r2 = 0.41;
            const double direct = marcus_jump(g, z, 0, r1 + r2, scheme, h);
            const double y1 = marcus_jump(g, z, 0, r1, scheme, h);
            const double composed = y1 + marcus_jump(g, z + y1, 0, r2, scheme, h);
            // Richardson estimate of the solver error at this h_max.
            const double fine = marcus_jump(g, z, 0, r1 + r2, scheme, h / 2);
            const double p = rk_order(scheme);
            const double tol = std::fabs(direct - fine) * std::pow(2.0, p) / (std::pow(2.0, p) - 1) + 1e-15;
            INFO(src << " scheme=" << to_string(scheme) << " tol=" << tol);
            CHECK(std::fabs(direct - composed) <= 10 * tol);
        }
    }
}

TEST_CASE("jump ODE converges to the closed form at the scheme order") {
    const LinearJump lin{0.7, 0.3};
    const Expr g = parse("0.7*x + 0.3");
    const double z = 1.2;
    const std::vector<double> hs = {0.2, 0.1, 0.05, 0.025};
    for (double r : {1.0, -1.5}) {
        const double exact = closed_form_jump(lin, z, r);
        for (auto scheme : {RkScheme::RK2, RkScheme::RK4}) {
            std::vector<double> errs;
            for (double h : hs) {
                errs.push_back(std::fabs(marcus_jump(g, z, 0, r, scheme, h) - exact));
            }
            const double slope = test::loglog_slope(hs, errs);
            INFO("r=" << r << " scheme=" << to_string(scheme) << " slope=" << slope);
            CHECK(std::fabs(slope - rk_order(scheme)) <= 0.3);
        }
    }
}

TEST_CASE("series truncation error obeys the Taylor remainder bound") {
    const Expr g = parse("x");
    for (double r : {-2.0, -0.5, 0.5, 1.0, 3.0}) {
        double factorial = 1;
        for (unsigned k = 1; k <= 15; ++k) {
            factorial *= (k + 1);
            const double err = std::fabs(df_series_jump(g, 1, 0, r, k) - std::expm1(r));
            const double bound = std::pow(std::fabs(r), k + 1) * std::exp(std::fabs(r)) / factorial;
            CHECK(err <= bound + 1e-14);
        }
    }
}

TEST_CASE("series interpretation is refused at a breakpoint") {
    const Expr g = parse("piecewise((-inf,1):x, (1,inf):2*x - 1)");
    CHECK_THROWS_AS(df_series_jump(g, 1.0, 0, 0.5, 4), NonSmoothError);
    CHECK_NOTHROW(df_series_jump(g, 0.5, 0, 0.1, 4));
    // The jump ODE is still defined for a piecewise g.
    const double y = marcus_jump(g, 1.0, 0, 0.5, RkScheme::RK4, 1e-3);
    // For z = 1, g = 2x - 1 on x >= 1: y = (e^{2r} - 1)/2.
    CHECK(y == doctest::Approx(std::expm1(1.0) / 2).epsilon(1e-9));
}

TEST_CASE("apply_jump dispatches on scheme") {
    const Expr g = parse("x");
    CHECK(apply_jump(SeriesTruncation{6}, g, 1, 0, 3) == df_series_jump(g, 1, 0, 3, 6));
    CHECK(apply_jump(OdeSolve{RkScheme::RK4, 0.01}, g, 1, 0, 3) == marcus_jump(g, 1, 0, 3, RkScheme::RK4, 0.01));
    CHECK(apply_jump(ClosedForm{LinearJump{1, 0}}, g, 1, 0, 3) == closed_form_jump(LinearJump{1, 0}, 1, 3));
    CHECK_THROWS_AS(validate(JumpScheme{SeriesTruncation{0}}), ValidationError);
    CHECK_THROWS_AS(validate(JumpScheme{OdeSolve{RkScheme::RK2, -1}}), ValidationError);
}
