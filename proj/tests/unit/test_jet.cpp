// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <random>

#include "doctest.h"
#include "jumpsde/error.hpp"
#include "jumpsde/expr.hpp"
#include "jumpsde/jet.hpp"

using namespace jumpsde;

namespace {

Jet random_jet(std::mt19937_64& rng, unsigned order) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<double> c(order + 1);
    for (auto& v : c) {
        v = u(rng);
    }
    return Jet(0.25, std::move(c));
}

void check_close(const Jet& a, const Jet& b, double rel) {
    REQUIRE(a.order() == b.order());
    for (unsigned k = 0; k <= a.order(); ++k) {
        CHECK(std::fabs(a[k] - b[k]) <= rel * std::max(1.0, std::fabs(a[k])));
    }
}

}  // namespace

TEST_CASE("jet_mul examples") {
    const Jet p = jet_mul(Jet(0, {1, 1}), Jet(0, {1, 1}));
    CHECK(p[0] == 1);
    CHECK(p[1] == 2);

    const Jet lam(0, {0, 1, 0});
    const Jet sq = jet_mul(lam, lam);
    CHECK(sq[0] == 0);
    CHECK(sq[1] == 0);
    CHECK(sq[2] == 1);

    const Jet a(0, {1.5, -2, 0.25, 3});
    const Jet one = Jet::constant(0, 1, 3);
    const Jet prod = jet_mul(a, one);
    for (unsigned k = 0; k <= 3; ++k) {
        CHECK(prod[k] == a[k]);
    }
}

TEST_CASE("jet_mul rejects mismatched jets") {
    CHECK_THROWS_AS(jet_mul(Jet(0, {1, 1}), Jet(0, {1, 1, 1})), ValidationError);
    CHECK_THROWS_AS(jet_mul(Jet(0, {1, 1}), Jet(1, {1, 1})), ValidationError);
    CHECK_THROWS_AS(Jet(0, {}), ValidationError);
    CHECK_THROWS_AS(Jet(0, {1, NAN}), ValidationError);
}

TEST_CASE("jet_mul is commutative and associative to round-off") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 200; ++i) {
        const unsigned order = static_cast<unsigned>(i % 9);
        const Jet a = random_jet(rng, order);
        const Jet b = random_jet(rng, order);
        const Jet c = random_jet(rng, order);
        check_close(jet_mul(a, b), jet_mul(b, a), 1e-12);
        check_close(jet_mul(jet_mul(a, b), c), jet_mul(a, jet_mul(b, c)), 1e-12);
    }
}

TEST_CASE("quotient inverts product") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
        const Jet a = random_jet(rng, 6);
        std::vector<double> bc(a.coeffs().begin(), a.coeffs().end());
        bc[0] = 3.0;  // keep the divisor away from zero
        const Jet b(a.base_point(), bc);
        check_close((a * b) / b, a, 1e-11);
    }
    CHECK_THROWS_AS(Jet(0, {1, 1}) / Jet(0, {0, 1}), DomainError);
}

TEST_CASE("elementary function identities") {
    const Jet x = Jet::variable(0.3, 7);
    check_close(log(exp(x)), x, 1e-13);
    check_close(sin(x) * sin(x) + cos(x) * cos(x), Jet::constant(0.3, 1, 7), 1e-13);
    check_close(sqrt(x) * sqrt(x), x, 1e-12);
    check_close(pow(x, 2.0), x * x, 1e-13);
    check_close(ipow(x, 3), x * x * x, 1e-15);
    check_close(ipow(x, -2), Jet::constant(0.3, 1, 7) / (x * x), 1e-13);
    check_close(pow(x, Jet::constant(0.3, 1.5, 7)), pow(x, 1.5), 1e-12);
}

TEST_CASE("composition matches direct expansion") {
    // outer = exp expanded at inner.value(); inner = sin(x) about 0.4.
    const Expr g = parse("exp(x)");
    const Jet inner = sin(Jet::variable(0.4, 6));
    const Jet outer = eval_jet(g, inner.value(), 0, 6);
    check_close(jet_compose(outer, inner), exp(inner), 1e-13);

    CHECK_THROWS_AS(jet_compose(eval_jet(g, 0.0, 0, 6), inner), ValidationError);
    CHECK_THROWS_AS(jet_compose(eval_jet(g, inner.value(), 0, 3), inner), ValidationError);
}

TEST_CASE("evaluate_at_offset sums the truncated series") {
    const Jet e = eval_jet(parse("exp(x)"), 0, 0, 20);
    CHECK(e.evaluate_at_offset(0.5) == doctest::Approx(std::exp(0.5)).epsilon(1e-15));
    CHECK(e.is_constant() == false);
    CHECK(Jet::constant(0, 4, 3).is_constant());
}
