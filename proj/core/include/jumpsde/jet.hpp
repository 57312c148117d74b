// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

namespace jumpsde {

/// Truncated Taylor expansion of a scalar function about `base_point()`.
///
/// Coefficient k is the k-th derivative divided by k!, so a jet of order K
/// stores K+1 coefficients. Arithmetic between jets requires equal order and
/// equal base point; mismatches raise ValidationError.
class Jet {
public:
    /// Throws ValidationError if `coeffs` is empty or holds a non-finite value.
    Jet(double base_point, std::vector<double> coeffs);

    static Jet constant(double base_point, double value, unsigned order);
    /// Expansion of the independent variable itself: [base, 1, 0, ...].
    static Jet variable(double base_point, unsigned order);

    double base_point() const noexcept { return base_point_; }
    unsigned order() const noexcept { return static_cast<unsigned>(coeffs_.size() - 1); }
    std::span<const double> coeffs() const noexcept { return coeffs_; }
    double operator[](unsigned k) const { return coeffs_[k]; }
    double value() const noexcept { return coeffs_.front(); }

    /// True when every coefficient above order 0 is exactly zero.
    bool is_constant() const noexcept;

    /// Sum of the series at displacement h from the base point.
    double evaluate_at_offset(double h) const noexcept;

private:
    double base_point_;
    std::vector<double> coeffs_;
};

/// Cauchy product truncated at the common order.
Jet jet_mul(const Jet& a, const Jet& b);

Jet operator+(const Jet& a, const Jet& b);
Jet operator-(const Jet& a, const Jet& b);
Jet operator-(const Jet& a);
Jet operator*(const Jet& a, const Jet& b);
/// Throws DomainError when b's value is zero.
Jet operator/(const Jet& a, const Jet& b);

Jet exp(const Jet& a);
/// Requires a positive value.
Jet log(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
/// Requires a positive value (order 0 also accepts zero).
Jet sqrt(const Jet& a);
/// a^p for constant real p; requires a positive value.
Jet pow(const Jet& a, double p);
/// a^b for a jet exponent; requires a positive value of a.
Jet pow(const Jet& a, const Jet& b);
/// a^n by binary powering; negative n divides into 1.
Jet ipow(const Jet& a, long n);

/// Taylor composition h(s) = outer(inner(s)).
///
/// `outer` is expanded about inner.value() and `inner` about its own base
/// point; the result is expanded about inner.base_point() with inner's order.
/// Throws ValidationError if outer.base_point() != inner.value() or
/// outer.order() < inner.order().
Jet jet_compose(const Jet& outer, const Jet& inner);

}  // namespace jumpsde
