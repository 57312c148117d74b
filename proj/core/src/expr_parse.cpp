// SPDX-License-Identifier: Apache-2.0
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "jumpsde/error.hpp"
#include "jumpsde/expr.hpp"

namespace jumpsde {

namespace {

constexpr std::uint8_t bit(Variable v) { return static_cast<std::uint8_t>(1U << static_cast<unsigned>(v)); }

}  // namespace

Expr make_expr(ExprNode node) { return Expr(std::make_shared<const ExprNode>(std::move(node))); }

Expr::Expr() : Expr(constant(0.0)) {}

bool Expr::references(Variable v) const noexcept { return (node_->vars & bit(v)) != 0; }

Regularity Expr::regularity() const noexcept {
    return node_->piecewise ? Regularity::PiecewiseSmooth : Regularity::Smooth;
}

bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) {
        return true;
    }
    const auto& x = a.node().value;
    const auto& y = b.node().value;
    if (x.index() != y.index()) {
        return false;
    }
    return std::visit(
        [&](const auto& lhs) -> bool {
            using T = std::decay_t<decltype(lhs)>;
            const auto& rhs = std::get<T>(y);
            if constexpr (std::is_same_v<T, Constant>) {
                return lhs.value == rhs.value;
            } else if constexpr (std::is_same_v<T, Var>) {
                return lhs.which == rhs.which;
            } else if constexpr (std::is_same_v<T, Negate>) {
                return lhs.operand == rhs.operand;
            } else if constexpr (std::is_same_v<T, Binary>) {
                return lhs.op == rhs.op && lhs.lhs == rhs.lhs && lhs.rhs == rhs.rhs;
            } else if constexpr (std::is_same_v<T, Call>) {
                return lhs.fn == rhs.fn && lhs.arg == rhs.arg;
            } else {
                if (lhs.branches.size() != rhs.branches.size()) {
                    return false;
                }
                for (std::size_t i = 0; i < lhs.branches.size(); ++i) {
                    const auto& p = lhs.branches[i];
                    const auto& q = rhs.branches[i];
                    if (p.lo != q.lo || p.hi != q.hi || !(p.body == q.body)) {
                        return false;
                    }
                }
                return true;
            }
        },
        x);
}

Expr constant(double value) { return make_expr(ExprNode{Constant{value}, 0, false}); }

Expr variable(Variable v) { return make_expr(ExprNode{Var{v}, bit(v), false}); }

Expr negate(Expr operand) {
    const auto vars = operand.node().vars;
    const bool pw = operand.node().piecewise;
    return make_expr(ExprNode{Negate{std::move(operand)}, vars, pw});
}

Expr binary(BinaryOp op, Expr lhs, Expr rhs) {
    const auto vars = static_cast<std::uint8_t>(lhs.node().vars | rhs.node().vars);
    const bool pw = lhs.node().piecewise || rhs.node().piecewise;
    return make_expr(ExprNode{Binary{op, std::move(lhs), std::move(rhs)}, vars, pw});
}

Expr call(Function fn, Expr arg) {
    const auto vars = arg.node().vars;
    const bool pw = arg.node().piecewise;
    return make_expr(ExprNode{Call{fn, std::move(arg)}, vars, pw});
}

Expr piecewise(std::vector<Branch> branches) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (branches.empty()) {
        throw ValidationError("piecewise needs at least one branch");
    }
    if (branches.front().lo != -inf) {
        throw ValidationError("piecewise branches must start at -inf");
    }
    if (branches.back().hi != inf) {
        throw ValidationError("piecewise branches must end at inf");
    }
    std::uint8_t vars = bit(Variable::X);
    for (std::size_t i = 0; i < branches.size(); ++i) {
        const auto& b = branches[i];
        if (std::isnan(b.lo) || std::isnan(b.hi) || !(b.lo < b.hi)) {
            throw ValidationError("piecewise branch " + std::to_string(i) + " has an empty interval");
        }
        if (i + 1 < branches.size() && b.hi != branches[i + 1].lo) {
            throw ValidationError("piecewise branches " + std::to_string(i) + " and " + std::to_string(i + 1) +
                                  " must share an endpoint");
        }
        vars = static_cast<std::uint8_t>(vars | b.body.node().vars);
    }
    return make_expr(ExprNode{Piecewise{std::move(branches)}, vars, true});
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string number_text(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* function_name(Function fn) {
    switch (fn) {
        case Function::Exp: return "exp";
        case Function::Ln: return "ln";
        case Function::Sin: return "sin";
        case Function::Cos: return "cos";
        case Function::Sqrt: return "sqrt";
    }
    return "?";
}

const char* op_text(BinaryOp op) {
    switch (op) {
        case BinaryOp::Add: return " + ";
        case BinaryOp::Sub: return " - ";
        case BinaryOp::Mul: return " * ";
        case BinaryOp::Div: return " / ";
        case BinaryOp::Pow: return " ^ ";
    }
    return " ? ";
}

void print(const Expr& e, std::string& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Constant>) {
                if (n.value < 0 || std::signbit(n.value)) {
                    out += "(" + number_text(n.value) + ")";
                } else {
                    out += number_text(n.value);
                }
            } else if constexpr (std::is_same_v<T, Var>) {
                out += n.which == Variable::X ? "x" : n.which == Variable::T ? "t" : "c";
            } else if constexpr (std::is_same_v<T, Negate>) {
                out += "(-";
                print(n.operand, out);
                out += ")";
            } else if constexpr (std::is_same_v<T, Binary>) {
                out += "(";
                print(n.lhs, out);
                out += op_text(n.op);
                print(n.rhs, out);
                out += ")";
            } else if constexpr (std::is_same_v<T, Call>) {
                out += function_name(n.fn);
                out += "(";
                print(n.arg, out);
                out += ")";
            } else {
                out += "piecewise(";
                for (std::size_t i = 0; i < n.branches.size(); ++i) {
                    if (i != 0) {
                        out += ", ";
                    }
                    const auto& b = n.branches[i];
                    out += "(" + number_text(b.lo) + "," + number_text(b.hi) + "):";
                    print(b.body, out);
                }
                out += ")";
            }
        },
        e.node().value);
}

}  // namespace

std::string to_string(const Expr& e) {
    std::string out;
    print(e, out);
    return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    Expr run() {
        skip_space();
        if (pos_ == src_.size()) {
            throw ParseError(pos_, "empty expression");
        }
        Expr e = parse_expr();
        skip_space();
        if (pos_ != src_.size()) {
            throw ParseError(pos_, "expected operator or end of input, found '" + std::string(1, src_[pos_]) + "'");
        }
        return e;
    }

private:
    void skip_space() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char ch) {
        skip_space();
        if (pos_ < src_.size() && src_[pos_] == ch) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char ch) {
        if (!accept(ch)) {
            throw ParseError(pos_, std::string("expected '") + ch + "'");
        }
    }

    Expr parse_expr() {
        Expr lhs = parse_term();
        for (;;) {
            if (accept('+')) {
                lhs = binary(BinaryOp::Add, std::move(lhs), parse_term());
            } else if (accept('-')) {
                lhs = binary(BinaryOp::Sub, std::move(lhs), parse_term());
            } else {
                return lhs;
            }
        }
    }

    Expr parse_term() {
        Expr lhs = parse_unary();
        for (;;) {
            if (accept('*')) {
                lhs = binary(BinaryOp::Mul, std::move(lhs), parse_unary());
            } else if (accept('/')) {
                lhs = binary(BinaryOp::Div, std::move(lhs), parse_unary());
            } else {
                return lhs;
            }
        }
    }

    Expr parse_unary() {
        if (accept('-')) {
            return negate(parse_unary());
        }
        if (accept('+')) {
            return parse_unary();
        }
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_primary();
        if (accept('^')) {
            return binary(BinaryOp::Pow, std::move(base), parse_unary());
        }
        return base;
    }

    static bool ident_start(char ch) { return std::isalpha(static_cast<unsigned char>(ch)) || ch == '_'; }
    static bool ident_char(char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'; }

    bool at_number() const {
        if (pos_ >= src_.size()) {
            return false;
        }
        const char ch = src_[pos_];
        return std::isdigit(static_cast<unsigned char>(ch)) || ch == '.';
    }

    double parse_number() {
        const std::size_t start = pos_;
        double value = 0.0;
        const char* first = src_.data() + pos_;
        const char* last = src_.data() + src_.size();
        auto [ptr, ec] = std::from_chars(first, last, value, std::chars_format::general);
        if (ec == std::errc::result_out_of_range) {
            throw ParseError(start, "numeric literal out of range");
        }
        if (ec != std::errc() || ptr == first) {
            throw ParseError(start, "malformed numeric literal");
        }
        pos_ += static_cast<std::size_t>(ptr - first);
        if (pos_ < src_.size() && ident_char(src_[pos_])) {
            throw ParseError(pos_, "unexpected character after numeric literal");
        }
        return value;
    }

    std::string_view parse_ident() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && ident_char(src_[pos_])) {
            ++pos_;
        }
        return src_.substr(start, pos_ - start);
    }

    Expr parse_primary() {
        skip_space();
        if (pos_ >= src_.size()) {
            throw ParseError(pos_, "expected expression");
        }
        const char ch = src_[pos_];
        if (at_number()) {
            return constant(parse_number());
        }
        if (ch == '(') {
            ++pos_;
            Expr inner = parse_expr();
            expect(')');
            return inner;
        }
        if (!ident_start(ch)) {
            throw ParseError(pos_, std::string("expected expression, found '") + ch + "'");
        }
        const std::size_t start = pos_;
        const std::string_view name = parse_ident();
        if (name == "x") {
            return variable(Variable::X);
        }
        if (name == "t") {
            return variable(Variable::T);
        }
        if (name == "c") {
            return variable(Variable::C);
        }
        if (name == "piecewise") {
            return parse_piecewise();
        }
        Function fn{};
        if (name == "exp") {
            fn = Function::Exp;
        } else if (name == "ln") {
            fn = Function::Ln;
        } else if (name == "sin") {
            fn = Function::Sin;
        } else if (name == "cos") {
            fn = Function::Cos;
        } else if (name == "sqrt") {
            fn = Function::Sqrt;
        } else {
            throw ParseError(start, "unknown identifier '" + std::string(name) + "'");
        }
        if (!accept('(')) {
            throw ParseError(pos_, "expected '(' after function name '" + std::string(name) + "'");
        }
        Expr arg = parse_expr();
        expect(')');
        return call(fn, std::move(arg));
    }

    double parse_bound() {
        skip_space();
        bool negative = false;
        if (pos_ < src_.size() && (src_[pos_] == '-' || src_[pos_] == '+')) {
            negative = src_[pos_] == '-';
            ++pos_;
            skip_space();
        }
        double v = 0.0;
        if (at_number()) {
            v = parse_number();
        } else if (pos_ < src_.size() && ident_start(src_[pos_])) {
            const std::size_t start = pos_;
            if (parse_ident() != "inf") {
                throw ParseError(start, "expected numeric bound or 'inf'");
            }
            v = std::numeric_limits<double>::infinity();
        } else {
            throw ParseError(pos_, "expected numeric bound or 'inf'");
        }
        return negative ? -v : v;
    }

    Expr parse_piecewise() {
        expect('(');
        std::vector<Branch> branches;
        const std::size_t start = pos_;
        do {
            expect('(');
            const double lo = parse_bound();
            expect(',');
            const double hi = parse_bound();
            expect(')');
            expect(':');
            Expr body = parse_expr();
            branches.push_back(Branch{lo, hi, std::move(body)});
        } while (accept(','));
        expect(')');
        try {
            return piecewise(std::move(branches));
        } catch (const ValidationError& err) {
            throw ParseError(start, err.what());
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view source) { return Parser(source).run(); }

}  // namespace jumpsde
