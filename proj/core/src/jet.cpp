// SPDX-License-Identifier: Apache-2.0
#include "jumpsde/jet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ipow.hpp"
#include "jumpsde/error.hpp"

namespace jumpsde {

namespace {

void check_compatible(const Jet& a, const Jet& b) {
    if (a.order() != b.order()) {
        throw ValidationError("jet order mismatch: " + std::to_string(a.order()) + " vs " +
                              std::to_string(b.order()));
    }
    if (a.base_point() != b.base_point()) {
        throw ValidationError("jet base point mismatch");
    }
}

Jet finished(double base, std::vector<double> c, const char* what) {
    for (double v : c) {
        if (!std::isfinite(v)) {
            throw DomainError(std::string("non-finite Taylor coefficient in ") + what);
        }
    }
    return Jet(base, std::move(c));
}

}  // namespace

Jet::Jet(double base_point, std::vector<double> coeffs) : base_point_(base_point), coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) {
        throw ValidationError("a jet needs at least one coefficient");
    }
    for (double v : coeffs_) {
        if (!std::isfinite(v)) {
            throw ValidationError("jet coefficients must be finite");
        }
    }
}

Jet Jet::constant(double base_point, double value, unsigned order) {
    std::vector<double> c(order + 1, 0.0);
    c[0] = value;
    return Jet(base_point, std::move(c));
}

Jet Jet::variable(double base_point, unsigned order) {
    std::vector<double> c(order + 1, 0.0);
    c[0] = base_point;
    if (order >= 1) {
        c[1] = 1.0;
    }
    return Jet(base_point, std::move(c));
}

bool Jet::is_constant() const noexcept {
    return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](double v) { return v == 0.0; });
}

double Jet::evaluate_at_offset(double h) const noexcept {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * h + *it;
    }
    return acc;
}

Jet jet_mul(const Jet& a, const Jet& b) {
    check_compatible(a, b);
    const unsigned n = a.order();
    std::vector<double> c(n + 1, 0.0);
    for (unsigned k = 0; k <= n; ++k) {
        double s = a[0] * b[k];
        for (unsigned i = 1; i <= k; ++i) {
            s += a[i] * b[k - i];
        }
        c[k] = s;
    }
    return finished(a.base_point(), std::move(c), "product");
}

Jet operator+(const Jet& a, const Jet& b) {
    check_compatible(a, b);
    std::vector<double> c(a.order() + 1);
    for (unsigned k = 0; k <= a.order(); ++k) {
        c[k] = a[k] + b[k];
    }
    return finished(a.base_point(), std::move(c), "sum");
}

Jet operator-(const Jet& a, const Jet& b) {
    check_compatible(a, b);
    std::vector<double> c(a.order() + 1);
    for (unsigned k = 0; k <= a.order(); ++k) {
        c[k] = a[k] - b[k];
    }
    return finished(a.base_point(), std::move(c), "difference");
}

Jet operator-(const Jet& a) {
    std::vector<double> c(a.coeffs().begin(), a.coeffs().end());
    for (double& v : c) {
        v = -v;
    }
    return Jet(a.base_point(), std::move(c));
}

Jet operator*(const Jet& a, const Jet& b) { return jet_mul(a, b); }

Jet operator/(const Jet& a, const Jet& b) {
    check_compatible(a, b);
    if (b[0] == 0.0) {
        throw DomainError("division by zero");
    }
    const unsigned n = a.order();
    std::vector<double> q(n + 1, 0.0);
    for (unsigned k = 0; k <= n; ++k) {
        double s = a[k];
        for (unsigned j = 1; j <= k; ++j) {
            s -= b[j] * q[k - j];
        }
        q[k] = s / b[0];
    }
    return finished(a.base_point(), std::move(q), "quotient");
}

Jet exp(const Jet& a) {
    const unsigned n = a.order();
    std::vector<double> e(n + 1, 0.0);
    e[0] = std::exp(a[0]);
    for (unsigned k = 1; k <= n; ++k) {
        double s = 0.0;
        for (unsigned j = 1; j <= k; ++j) {
            s += j * a[j] * e[k - j];
        }
        e[k] = s / k;
    }
    return finished(a.base_point(), std::move(e), "exp");
}

Jet log(const Jet& a) {
    if (!(a[0] > 0.0)) {
        throw DomainError("ln of non-positive value");
    }
    const unsigned n = a.order();
    std::vector<double> l(n + 1, 0.0);
    l[0] = std::log(a[0]);
    for (unsigned k = 1; k <= n; ++k) {
        double s = 0.0;
        for (unsigned j = 1; j < k; ++j) {
            s += j * l[j] * a[k - j];
        }
        l[k] = (a[k] - s / k) / a[0];
    }
    return finished(a.base_point(), std::move(l), "ln");
}

namespace {

// sin and cos share one recurrence; returns {sin, cos}.
std::pair<std::vector<double>, std::vector<double>> sin_cos(const Jet& a) {
    const unsigned n = a.order();
    std::vector<double> s(n + 1, 0.0);
    std::vector<double> c(n + 1, 0.0);
    s[0] = std::sin(a[0]);
    c[0] = std::cos(a[0]);
    for (unsigned k = 1; k <= n; ++k) {
        double ss = 0.0;
        double cc = 0.0;
        for (unsigned j = 1; j <= k; ++j) {
            ss += j * a[j] * c[k - j];
            cc += j * a[j] * s[k - j];
        }
        s[k] = ss / k;
        c[k] = -cc / k;
    }
    return {std::move(s), std::move(c)};
}

}  // namespace

Jet sin(const Jet& a) { return finished(a.base_point(), sin_cos(a).first, "sin"); }

Jet cos(const Jet& a) { return finished(a.base_point(), sin_cos(a).second, "cos"); }

Jet sqrt(const Jet& a) {
    const unsigned n = a.order();
    if (a[0] < 0.0 || (a[0] == 0.0 && n > 0)) {
        throw DomainError(a[0] < 0.0 ? "sqrt of negative value" : "sqrt is not differentiable at 0");
    }
    std::vector<double> r(n + 1, 0.0);
    r[0] = std::sqrt(a[0]);
    for (unsigned k = 1; k <= n; ++k) {
        double s = a[k];
        for (unsigned j = 1; j < k; ++j) {
            s -= r[j] * r[k - j];
        }
        r[k] = s / (2.0 * r[0]);
    }
    return finished(a.base_point(), std::move(r), "sqrt");
}

Jet pow(const Jet& a, double p) {
    if (!(a[0] > 0.0)) {
        throw DomainError("non-integer power of a non-positive base");
    }
    const unsigned n = a.order();
    std::vector<double> w(n + 1, 0.0);
    w[0] = std::pow(a[0], p);
    for (unsigned k = 1; k <= n; ++k) {
        double s = 0.0;
        for (unsigned j = 0; j < k; ++j) {
            s += (p * (k - j) - j) * a[k - j] * w[j];
        }
        w[k] = s / (k * a[0]);
    }
    return finished(a.base_point(), std::move(w), "power");
}

Jet pow(const Jet& a, const Jet& b) {
    check_compatible(a, b);
    if (!(a[0] > 0.0)) {
        throw DomainError("variable power of a non-positive base");
    }
    // w = exp(b ln a) with w0 taken from std::pow so that order 0 matches eval.
    const Jet exponent = b * log(a);
    const unsigned n = a.order();
    std::vector<double> w(n + 1, 0.0);
    w[0] = std::pow(a[0], b[0]);
    for (unsigned k = 1; k <= n; ++k) {
        double s = 0.0;
        for (unsigned j = 1; j <= k; ++j) {
            s += j * exponent[j] * w[k - j];
        }
        w[k] = s / k;
    }
    return finished(a.base_point(), std::move(w), "power");
}

Jet ipow(const Jet& a, long n) {
    if (n == 0) {
        return Jet::constant(a.base_point(), 1.0, a.order());
    }
    if (n > 0) {
        return detail::ipow_positive(a, static_cast<unsigned long>(n));
    }
    if (a[0] == 0.0) {
        throw DomainError("zero raised to a negative power");
    }
    const Jet denom = detail::ipow_positive(a, static_cast<unsigned long>(-n));
    return Jet::constant(a.base_point(), 1.0, a.order()) / denom;
}

Jet jet_compose(const Jet& outer, const Jet& inner) {
    if (outer.base_point() != inner.value()) {
        throw ValidationError("jet_compose: outer jet must be expanded about inner.value()");
    }
    if (outer.order() < inner.order()) {
        throw ValidationError("jet_compose: outer order is lower than inner order");
    }
    const unsigned n = inner.order();
    // delta = inner - inner(0); powers[m] holds delta^m truncated at n.
    std::vector<double> delta(inner.coeffs().begin(), inner.coeffs().end());
    delta[0] = 0.0;
    std::vector<double> power(n + 1, 0.0);
    power[0] = 1.0;
    std::vector<double> out(n + 1, 0.0);
    out[0] = outer[0];
    for (unsigned m = 1; m <= n; ++m) {
        std::vector<double> next(n + 1, 0.0);
        // delta^m has no terms below degree m.
        for (unsigned k = m; k <= n; ++k) {
            double s = 0.0;
            for (unsigned i = 1; i <= k - (m - 1); ++i) {
                s += delta[i] * power[k - i];
            }
            next[k] = s;
        }
        power = std::move(next);
        for (unsigned k = m; k <= n; ++k) {
            out[k] += outer[m] * power[k];
        }
    }
    return finished(inner.base_point(), std::move(out), "composition");
}

}  // namespace jumpsde
