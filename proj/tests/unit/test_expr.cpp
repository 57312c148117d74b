// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <random>
#include <string>

#include "doctest.h"
#include "jumpsde/error.hpp"
#include "jumpsde/expr.hpp"
#include "jumpsde/jet.hpp"
#include "oracles.hpp"

using namespace jumpsde;

namespace {

Expr X() { return variable(Variable::X); }
Expr T() { return variable(Variable::T); }

std::size_t parse_error_offset(const std::string& src) {
    try {
        parse(src);
    } catch (const ParseError& err) {
        return err.offset();
    }
    FAIL("expected a parse error for '" << src << "'");
    return 0;
}

// Random trees shaped like parser output: non-negative constants and no
// unary plus.
Expr random_expr(std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 8);
    const int kind = pick(rng);
    switch (kind) {
        case 0: return constant(std::uniform_real_distribution<double>(0.0, 10.0)(rng));
        case 1: return X();
        case 2: return T();
        case 3: return negate(random_expr(rng, depth - 1));
        case 4:
        case 5: {
            const auto op = static_cast<BinaryOp>(std::uniform_int_distribution<int>(0, 4)(rng));
            return binary(op, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
        }
        case 6: {
            const auto fn = static_cast<Function>(std::uniform_int_distribution<int>(0, 4)(rng));
            return call(fn, random_expr(rng, depth - 1));
        }
        case 7: return variable(Variable::C);
        default: {
            const double cut = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
            const double inf = std::numeric_limits<double>::infinity();
            return piecewise({Branch{-inf, cut, random_expr(rng, depth - 1)},
                              Branch{cut, inf, random_expr(rng, depth - 1)}});
        }
    }
}

}  // namespace

TEST_CASE("parse builds the expected trees") {
    CHECK(parse("x") == X());
    CHECK(parse("x*exp(2*t)") == binary(BinaryOp::Mul, X(), call(Function::Exp, binary(BinaryOp::Mul, constant(2), T()))));
    CHECK(parse("1 + 2 * 3") == binary(BinaryOp::Add, constant(1), binary(BinaryOp::Mul, constant(2), constant(3))));
    CHECK(parse("2^3^2") == binary(BinaryOp::Pow, constant(2), binary(BinaryOp::Pow, constant(3), constant(2))));
    CHECK(parse("-x^2") == negate(binary(BinaryOp::Pow, X(), constant(2))));
    CHECK(parse("x^-1") == binary(BinaryOp::Pow, X(), negate(constant(1))));
    CHECK(parse("1.5e-3") == constant(1.5e-3));
    CHECK(parse(" ( x ) ") == X());
}

TEST_CASE("parse reports offsets and expectations") {
    CHECK(parse_error_offset("x*") == 2);
    CHECK(parse_error_offset("") == 0);
    CHECK(parse_error_offset("(x + 1") == 6);
    CHECK(parse_error_offset("x + + ") == 6);
    CHECK(parse_error_offset("x y") == 2);
    CHECK(parse_error_offset("exp x") == 4);
    CHECK(parse_error_offset("2x") == 1);

    try {
        parse("foo(x)");
        FAIL("unknown identifier accepted");
    } catch (const ParseError& err) {
        CHECK(err.offset() == 0);
        CHECK(std::string(err.what()).find("unknown identifier 'foo'") != std::string::npos);
    }
    try {
        parse("x*");
        FAIL("incomplete expression accepted");
    } catch (const ParseError& err) {
        CHECK(std::string(err.what()).find("expected expression") != std::string::npos);
    }
}

TEST_CASE("piecewise syntax and tiling") {
    const Expr e = parse("piecewise((-inf,0):-x, (0,inf):x)");
    CHECK(e.regularity() == Regularity::PiecewiseSmooth);
    CHECK(eval(e, -2.0, 0.0) == 2.0);
    CHECK(eval(e, 3.0, 0.0) == 3.0);
    CHECK(eval(e, 0.0, 0.0) == 0.0);
    CHECK(parse("x^2").regularity() == Regularity::Smooth);

    CHECK_THROWS_AS(parse("piecewise((-inf,0):1, (1,inf):2)"), ParseError);  // gap
    CHECK_THROWS_AS(parse("piecewise((0,inf):1)"), ParseError);              // does not start at -inf
    CHECK_THROWS_AS(parse("piecewise((-inf,1):1, (1,0):2)"), ParseError);    // empty interval
}

TEST_CASE("eval examples") {
    CHECK(eval(parse("x*t"), 2, 3) == 6);
    CHECK(eval(parse("exp(t+c)"), 0, 1, 0.5) == doctest::Approx(4.481689070338065).epsilon(1e-15));
    CHECK(eval(parse("2^10"), 0, 0) == 1024);
    CHECK(eval(parse("x^-2"), 2, 0) == 0.25);
    CHECK(eval(parse("(-8)^3"), 0, 0) == -512);
    CHECK(eval(parse("x^0.5"), 4, 0) == 2);
    CHECK(eval(parse("0^0"), 0, 0) == 1);
}

TEST_CASE("eval domain errors are hard errors") {
    CHECK_THROWS_AS(eval(parse("1/x"), 0, 0), DomainError);
    CHECK_THROWS_AS(eval(parse("ln(x)"), 0, 0), DomainError);
    CHECK_THROWS_AS(eval(parse("ln(x)"), -1, 0), DomainError);
    CHECK_THROWS_AS(eval(parse("sqrt(x)"), -1e-9, 0), DomainError);
    CHECK_THROWS_AS(eval(parse("x^-1"), 0, 0), DomainError);
    CHECK_THROWS_AS(eval(parse("x^0.5"), -1, 0), DomainError);
    CHECK_THROWS_AS(eval(parse("exp(x)"), 1000, 0), DomainError);
    CHECK_THROWS_AS(eval(parse("c"), 0, 0), ValidationError);

    try {
        eval(parse("1 + 1/(x - 2)"), 2, 0);
        FAIL("no domain error");
    } catch (const DomainError& err) {
        CHECK(std::string(err.what()).find("(1 / (x - 2))") != std::string::npos);
    }
}

TEST_CASE("variable references") {
    const Expr e = parse("exp(t + c)");
    CHECK(e.references(Variable::T));
    CHECK(e.references(Variable::C));
    CHECK_FALSE(e.references(Variable::X));
    CHECK_FALSE(parse("3").references(Variable::X));
}

TEST_CASE("parse of to_string is the identity on parser-shaped trees") {
    std::mt19937_64 rng(20240611);
    for (int i = 0; i < 500; ++i) {
        const Expr e = random_expr(rng, 5);
        const std::string text = to_string(e);
        INFO(text);
        CHECK(parse(text) == e);
    }
    for (const char* src : {"x*exp(2*t)", "-x^2 + 3/t", "piecewise((-inf,-1.5):x, (-1.5,inf):sin(x)^2)",
                            "sqrt(ln(cos(x)))", "1e-300 * x"}) {
        const Expr e = parse(src);
        CHECK(parse(to_string(e)) == e);
    }
}

TEST_CASE("eval_jet examples") {
    const Jet e = eval_jet(parse("exp(x)"), 0, 0, 3);
    CHECK(e[0] == 1);
    CHECK(e[1] == 1);
    CHECK(e[2] == 0.5);
    CHECK(e[3] == doctest::Approx(1.0 / 6).epsilon(1e-15));

    const Jet sq = eval_jet(parse("x^2"), 3, 0, 2);
    CHECK(sq[0] == 9);
    CHECK(sq[1] == 6);
    CHECK(sq[2] == 1);

    const Jet s = eval_jet(parse("sin(x)"), 0, 0, 3);
    CHECK(s[0] == 0);
    CHECK(s[1] == 1);
    CHECK(s[2] == 0);
    CHECK(s[3] == doctest::Approx(-1.0 / 6).epsilon(1e-15));
}

TEST_CASE("eval_jet matches binomial expansion for polynomials") {
    // (x + 2)^5 - 3 x^2 about x0 = 1.5: coefficients of (1.5 + h + 2)^5 - 3 (1.5 + h)^2.
    const Expr e = parse("(x + 2)^5 - 3*x^2");
    const double x0 = 1.5;
    for (unsigned K = 5; K <= 8; ++K) {
        const Jet j = eval_jet(e, x0, 0, K);
        const double a = x0 + 2;
        const double binom5[] = {1, 5, 10, 10, 5, 1};
        for (unsigned k = 0; k <= K; ++k) {
            double expected = k <= 5 ? binom5[k] * std::pow(a, 5 - k) : 0.0;
            if (k == 0) {
                expected -= 3 * x0 * x0;
            } else if (k == 1) {
                expected -= 6 * x0;
            } else if (k == 2) {
                expected -= 3;
            }
            CHECK(j[k] == doctest::Approx(expected).epsilon(1e-14));
        }
    }
}

TEST_CASE("eval_jet agrees with finite differences on a smooth corpus") {
    struct Case {
        const char* src;
        double x0;
        double t;
    };
    const Case corpus[] = {
        {"exp(sin(x))", 0.4, 0},   {"x^3 - 2*x + 1", 0.7, 0},     {"ln(1 + x^2)", 0.8, 0},
        {"sqrt(x + 3)", 0.5, 0},   {"cos(x)/(2 + x)", 0.3, 0},   {"x^2.5", 1.2, 0},
        {"x^x", 1.3, 0},           {"exp(-x*t) * x", 0.6, 1.7},  {"0.5*x + 1", -0.4, 0},
        {"sin(x)*cos(2*x) + t", 1.1, 0.25},
    };
    for (const auto& c : corpus) {
        const Expr e = parse(c.src);
        const Jet j = eval_jet(e, c.x0, c.t, 4);
        double factorial = 1;
        for (int k = 1; k <= 4; ++k) {
            factorial *= k;
            const double fd = test::fd_derivative([&](double x) { return eval(e, x, c.t); }, c.x0, k, 0.1);
            const double ad = factorial * j[static_cast<unsigned>(k)];
            INFO(c.src << " k=" << k << " jet=" << ad << " fd=" << fd);
            CHECK(std::fabs(ad - fd) <= 1e-5 * std::max(1.0, std::fabs(fd)));
        }
    }
}

TEST_CASE("order-0 jet equals plain evaluation bit for bit") {
    std::mt19937_64 rng(7);
    int checked = 0;
    for (int i = 0; i < 2000; ++i) {
        Expr e = random_expr(rng, 4);
        if (e.references(Variable::C)) {
            continue;
        }
        const double x = std::uniform_real_distribution<double>(-3, 3)(rng);
        const double t = std::uniform_real_distribution<double>(0, 2)(rng);
        double plain = 0;
        try {
            plain = eval(e, x, t);
        } catch (const DomainError&) {
            CHECK_THROWS_AS(eval_jet(e, x, t, 0), DomainError);
            continue;
        }
        CHECK(eval_jet(e, x, t, 0)[0] == plain);
        ++checked;
    }
    CHECK(checked > 500);
}

TEST_CASE("eval_jet refuses breakpoints and c") {
    const Expr e = parse("piecewise((-inf,1):x, (1,inf):2*x - 1)");
    CHECK_THROWS_AS(eval_jet(e, 1.0, 0, 2), NonSmoothError);
    CHECK(eval_jet(e, 1.0, 0, 0)[0] == 1.0);
    const Jet left = eval_jet(e, 0.5, 0, 2);
    CHECK(left[1] == 1);
    const Jet right = eval_jet(e, 1.5, 0, 2);
    CHECK(right[1] == 2);
    CHECK_THROWS_AS(eval_jet(parse("x + c"), 0, 0, 1), ValidationError);
    CHECK_THROWS_AS(eval_jet(parse("sqrt(x)"), 0, 0, 1), DomainError);
    CHECK_THROWS_AS(eval_jet(parse("1/x"), 0, 0, 3), DomainError);
}
