#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fracmoc/gamma.hpp"
#include "fracmoc/order.hpp"
#include "fracmoc/quadrature.hpp"

namespace fracmoc {

// A real function of one real argument, optionally with its exact derivative.
// Callables must be safe to invoke concurrently.
class ScalarFn {
public:
    using Fn = std::function<double(double)>;

    explicit ScalarFn(Fn f, std::optional<Fn> df = std::nullopt);

    double operator()(double x) const { return f_(x); }

    // f(0), evaluated once at construction. Throws if f is undefined at 0.
    double value_at_zero() const;

    bool has_derivative() const { return df_.has_value(); }

    // f'(x): exact when supplied, otherwise a fourth-order finite difference
    // whose step shrinks with |x| so that samples never cross 0.
    double derivative(double x) const;

private:
    Fn f_;
    std::optional<Fn> df_;
    std::optional<double> f0_;
};

// Fourth-order five-point finite difference; one-sided at x = 0.
double numeric_derivative(const ScalarFn::Fn& f, double x);

// Coefficients f^(alpha k)(x) of the fractional Taylor series at `base`.
struct TaylorCoefficients {
    Order alpha;
    double base;
    Eigen::VectorXd coeffs;

    TaylorCoefficients(Order a, double x, Eigen::VectorXd c);
};

// Riemann-Liouville integral (1/G(a)) int_0^x (x - xi)^(a-1) f(xi) dxi.
double rl_integral(const ScalarFn& f, Order alpha, double x, const QuadratureConfig& cfg = {});

// Modified Riemann-Liouville (Jumarie) derivative with lower terminal 0.
// alpha = 1 falls back to the classical derivative.
double mrl_derivative(const ScalarFn& f, Order alpha, double x, const QuadratureConfig& cfg = {});

// Same as above with a prebuilt rule for kernel exponent 1 - alpha; lets
// repeated evaluations (nested operators, residual sweeps) skip rebuilding
// the weights. The rule is ignored when alpha = 1.
double mrl_derivative(const ScalarFn& f, Order alpha, double x, const ProductRule<double>& rule);

// Rule with kernel exponent alpha, as used by rl_integral.
double rl_integral(const ScalarFn& f, Order alpha, double x, const ProductRule<double>& rule);

// Shifted fractional difference sum_{k=0}^{n_terms} (-1)^k C(a,k) [f(x + (a-k)h) - f(0)].
// Sample points left of 0 contribute nothing.
double gl_difference(const ScalarFn& f, Order alpha, double x, double h, int n_terms);

struct GlEstimate {
    double estimate;
    // Empirical convergence order from the last three step sizes; NaN when
    // successive differences vanish.
    double observed_order;
    Eigen::VectorXd values;  // gl_difference/h^a per step size
};

GlEstimate gl_derivative(const ScalarFn& f, Order alpha, double x, std::span<const double> h_sequence,
                         int n_terms);

// int_0^x f(xi) (dxi)^a = G(1+a) * rl_integral.
double integral_dx_alpha(const ScalarFn& f, Order alpha, double x, const QuadratureConfig& cfg = {});

// G(1+b)/G(1+b-a): D^a x^b = coeff * x^(b-a). Zero when 1+b-a is a pole, and
// zero for b = 0 since the modified derivative annihilates constants.
double power_rule_coeff(double beta_exponent, Order alpha);

// sum_k h^(a k)/G(1 + a k) * coeffs[k].
double taylor_sum(const TaylorCoefficients& coeffs, double h);

// Generalized binomial weights (-1)^k C(a, k), k = 0..n.
Eigen::VectorXd gl_weights(double alpha, int n);

}  // namespace fracmoc
