// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <limits>
#include <string>

#include "ipow.hpp"
#include "jumpsde/error.hpp"
#include "jumpsde/expr.hpp"
#include "jumpsde/jet.hpp"

namespace jumpsde {

namespace {

// Exponents at or below this magnitude that are whole numbers are applied by
// repeated multiplication.
constexpr double kMaxIntegerExponent = 1L << 30;

bool integral_exponent(double b) { return std::trunc(b) == b && std::fabs(b) <= kMaxIntegerExponent; }

[[noreturn]] void domain_failure(const std::string& what, const Expr& where) {
    throw DomainError(what + " in '" + to_string(where) + "'");
}

const Branch* select_branch(const Piecewise& pw, double x) {
    for (const auto& b : pw.branches) {
        if (b.lo <= x && x < b.hi) {
            return &b;
        }
    }
    return nullptr;
}

struct ScalarEvaluator {
    double x;
    double t;
    std::optional<double> c;

    double operator()(const Expr& e) const {
        const double v = std::visit([&](const auto& n) { return visit(n, e); }, e.node().value);
        if (!std::isfinite(v)) {
            domain_failure("non-finite result", e);
        }
        return v;
    }

    double visit(const Constant& n, const Expr&) const { return n.value; }

    double visit(const Var& n, const Expr&) const {
        switch (n.which) {
            case Variable::X: return x;
            case Variable::T: return t;
            case Variable::C: break;
        }
        if (!c) {
            throw ValidationError("expression references c but no value was supplied");
        }
        return *c;
    }

    double visit(const Negate& n, const Expr&) const { return -(*this)(n.operand); }

    double visit(const Binary& n, const Expr& self) const {
        const double a = (*this)(n.lhs);
        const double b = (*this)(n.rhs);
        switch (n.op) {
            case BinaryOp::Add: return a + b;
            case BinaryOp::Sub: return a - b;
            case BinaryOp::Mul: return a * b;
            case BinaryOp::Div:
                if (b == 0.0) {
                    domain_failure("division by zero", self);
                }
                return a / b;
            case BinaryOp::Pow: return power(a, b, self);
        }
        return 0.0;
    }

    static double power(double a, double b, const Expr& self) {
        if (integral_exponent(b)) {
            if (b == 0.0) {
                return 1.0;
            }
            if (b > 0.0) {
                return detail::ipow_positive(a, static_cast<unsigned long>(b));
            }
            if (a == 0.0) {
                domain_failure("zero raised to a negative power", self);
            }
            return 1.0 / detail::ipow_positive(a, static_cast<unsigned long>(-b));
        }
        if (!(a > 0.0)) {
            domain_failure("non-integer power of a non-positive base", self);
        }
        return std::pow(a, b);
    }

    double visit(const Call& n, const Expr& self) const {
        const double a = (*this)(n.arg);
        switch (n.fn) {
            case Function::Exp: return std::exp(a);
            case Function::Ln:
                if (!(a > 0.0)) {
                    domain_failure("ln of non-positive value", self);
                }
                return std::log(a);
            case Function::Sin: return std::sin(a);
            case Function::Cos: return std::cos(a);
            case Function::Sqrt:
                if (a < 0.0) {
                    domain_failure("sqrt of negative value", self);
                }
                return std::sqrt(a);
        }
        return 0.0;
    }

    double visit(const Piecewise& n, const Expr& self) const {
        const Branch* b = select_branch(n, x);
        if (b == nullptr) {
            domain_failure("no piecewise branch contains x", self);
        }
        return (*this)(b->body);
    }
};

struct JetEvaluator {
    double x0;
    double t;
    unsigned order;

    Jet operator()(const Expr& e) const {
        try {
            return std::visit([&](const auto& n) { return visit(n, e); }, e.node().value);
        } catch (const DomainError& err) {
            const std::string msg = err.what();
            // Annotate once, at the innermost failing node.
            if (msg.find(" in '") == std::string::npos) {
                domain_failure(msg, e);
            }
            throw;
        }
    }

    Jet visit(const Constant& n, const Expr&) const { return Jet::constant(x0, n.value, order); }

    Jet visit(const Var& n, const Expr&) const {
        switch (n.which) {
            case Variable::X: return Jet::variable(x0, order);
            case Variable::T: return Jet::constant(x0, t, order);
            case Variable::C: break;
        }
        throw ValidationError("jets are not defined for expressions in c");
    }

    Jet visit(const Negate& n, const Expr&) const { return -(*this)(n.operand); }

    Jet visit(const Binary& n, const Expr&) const {
        const Jet a = (*this)(n.lhs);
        const Jet b = (*this)(n.rhs);
        switch (n.op) {
            case BinaryOp::Add: return a + b;
            case BinaryOp::Sub: return a - b;
            case BinaryOp::Mul: return a * b;
            case BinaryOp::Div: return a / b;
            case BinaryOp::Pow:
                if (b.is_constant()) {
                    if (integral_exponent(b.value())) {
                        return ipow(a, static_cast<long>(b.value()));
                    }
                    return pow(a, b.value());
                }
                return pow(a, b);
        }
        return a;
    }

    Jet visit(const Call& n, const Expr&) const {
        const Jet a = (*this)(n.arg);
        switch (n.fn) {
            case Function::Exp: return exp(a);
            case Function::Ln: return log(a);
            case Function::Sin: return sin(a);
            case Function::Cos: return cos(a);
            case Function::Sqrt: return sqrt(a);
        }
        return a;
    }

    Jet visit(const Piecewise& n, const Expr& self) const {
        const Branch* b = select_branch(n, x0);
        if (b == nullptr) {
            domain_failure("no piecewise branch contains x", self);
        }
        if (order > 0 && (x0 == b->lo)) {
            throw NonSmoothError("x = " + std::to_string(x0) + " lies on a breakpoint of '" + to_string(self) + "'");
        }
        return (*this)(b->body);
    }
};

}  // namespace

double eval(const Expr& e, double x, double t, std::optional<double> c) { return ScalarEvaluator{x, t, c}(e); }

Jet eval_jet(const Expr& e, double x0, double t, unsigned order) {
    if (e.references(Variable::C)) {
        throw ValidationError("jets are not defined for expressions in c");
    }
    if (!std::isfinite(x0) || !std::isfinite(t)) {
        throw DomainError("non-finite expansion point");
    }
    return JetEvaluator{x0, t, order}(e);
}

}  // namespace jumpsde
