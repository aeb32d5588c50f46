#include "fracmoc/frcalc.hpp"

#include <cmath>
#include <string>

namespace fracmoc {

ScalarFn::ScalarFn(Fn f, std::optional<Fn> df) : f_(std::move(f)), df_(std::move(df)) {
    try {
        f0_ = f_(0.0);
    } catch (const Error&) {
        f0_.reset();
    }
}

double ScalarFn::value_at_zero() const {
    if (!f0_) throw DomainError("function is not defined at 0");
    return *f0_;
}

double ScalarFn::derivative(double x) const {
    if (df_) return (*df_)(x);
    return numeric_derivative(f_, x);
}

double numeric_derivative(const ScalarFn::Fn& f, double x) {
    if (x == 0.0) {
        const double d = 1e-3;
        return (-25.0 * f(0.0) + 48.0 * f(d) - 36.0 * f(2.0 * d) + 16.0 * f(3.0 * d) - 3.0 * f(4.0 * d)) /
               (12.0 * d);
    }
    const double d = 1e-3 * std::min(std::abs(x), 1.0);
    return (f(x - 2.0 * d) - 8.0 * f(x - d) + 8.0 * f(x + d) - f(x + 2.0 * d)) / (12.0 * d);
}

TaylorCoefficients::TaylorCoefficients(Order a, double x, Eigen::VectorXd c)
    : alpha(a), base(x), coeffs(std::move(c)) {
    if (coeffs.size() == 0) throw DomainError("Taylor coefficient sequence must be nonempty");
    if (!(x >= 0.0)) throw DomainError("Taylor base point must be >= 0");
}

double rl_integral(const ScalarFn& f, Order alpha, double x, const ProductRule<double>& rule) {
    if (!(x >= 0.0)) throw DomainError("rl_integral: x must be >= 0, got " + std::to_string(x));
    if (x == 0.0) return 0.0;
    const double a = alpha.value();
    const double sum = rule.apply([&](double s) { return f(x * s); });
    return std::pow(x, a) * rgamma(a) * sum;
}

double rl_integral(const ScalarFn& f, Order alpha, double x, const QuadratureConfig& cfg) {
    if (!(x >= 0.0)) throw DomainError("rl_integral: x must be >= 0, got " + std::to_string(x));
    if (x == 0.0) return 0.0;
    return rl_integral(f, alpha, x, make_product_rule(alpha.value(), cfg));
}

double mrl_derivative(const ScalarFn& f, Order alpha, double x, const ProductRule<double>& rule) {
    if (alpha.is_classical()) return f.derivative(x);
    if (!(x > 0.0)) throw DomainError("mrl_derivative: x must be > 0, got " + std::to_string(x));
    const double a = alpha.value();
    const double f0 = f.value_at_zero();
    // d/dx of the RL integral of f - f(0), after the scaling xi = x s.
    const double sum = rule.apply([&](double s) {
        if (s == 0.0) return 0.0;
        const double xi = x * s;
        return (1.0 - a) * (f(xi) - f0) + xi * f.derivative(xi);
    });
    return std::pow(x, -a) * rgamma(1.0 - a) * sum;
}

double mrl_derivative(const ScalarFn& f, Order alpha, double x, const QuadratureConfig& cfg) {
    if (alpha.is_classical()) return f.derivative(x);
    if (!(x > 0.0)) throw DomainError("mrl_derivative: x must be > 0, got " + std::to_string(x));
    return mrl_derivative(f, alpha, x, make_product_rule(1.0 - alpha.value(), cfg));
}

Eigen::VectorXd gl_weights(double alpha, int n) {
    Eigen::VectorXd w(n + 1);
    w[0] = 1.0;
    for (int k = 1; k <= n; ++k) w[k] = w[k - 1] * (double(k - 1) - alpha) / double(k);
    return w;
}

double gl_difference(const ScalarFn& f, Order alpha, double x, double h, int n_terms) {
    if (!(h > 0.0)) throw DomainError("gl_difference: h must be > 0");
    if (n_terms < 1) throw DomainError("gl_difference: n_terms must be >= 1");
    const double a = alpha.value();
    const double f0 = f.value_at_zero();
    double weight = 1.0;
    double sum = 0.0;
    for (int k = 0; k <= n_terms; ++k) {
        if (k > 0) weight *= (double(k - 1) - a) / double(k);
        const double sample = x + (a - double(k)) * h;
        if (sample < 0.0) break;
        if (weight != 0.0) sum += weight * (f(sample) - f0);
    }
    return sum;
}

GlEstimate gl_derivative(const ScalarFn& f, Order alpha, double x, std::span<const double> h_sequence,
                         int n_terms) {
    if (h_sequence.size() < 3) throw DomainError("gl_derivative: need at least three step sizes");
    for (std::size_t i = 0; i < h_sequence.size(); ++i) {
        if (!(h_sequence[i] > 0.0)) throw DomainError("gl_derivative: step sizes must be positive");
        if (i > 0 && !(h_sequence[i] < h_sequence[i - 1]))
            throw DomainError("gl_derivative: step sizes must be strictly decreasing");
    }
    const double a = alpha.value();
    const auto n = static_cast<Eigen::Index>(h_sequence.size());
    GlEstimate out{0.0, std::numeric_limits<double>::quiet_NaN(), Eigen::VectorXd(n)};
    for (Eigen::Index i = 0; i < n; ++i) {
        const double h = h_sequence[i];
        out.values[i] = gl_difference(f, alpha, x, h, n_terms) / std::pow(h, a);
    }
    out.estimate = out.values[n - 1];
    const double d1 = std::abs(out.values[n - 2] - out.values[n - 3]);
    const double d2 = std::abs(out.values[n - 1] - out.values[n - 2]);
    if (d1 > 0.0 && d2 > 0.0)
        out.observed_order = std::log(d1 / d2) / std::log(h_sequence[n - 2] / h_sequence[n - 1]);
    return out;
}

double integral_dx_alpha(const ScalarFn& f, Order alpha, double x, const QuadratureConfig& cfg) {
    return gamma(1.0 + alpha.value()) * rl_integral(f, alpha, x, cfg);
}

double power_rule_coeff(double beta_exponent, Order alpha) {
    const double a = alpha.value();
    if (beta_exponent == 0.0) return 0.0;
    const double top = 1.0 + beta_exponent;
    if (is_gamma_pole(top))
        throw PoleError("power_rule_coeff: Gamma(1 + beta) has a pole at beta = " +
                        std::to_string(beta_exponent));
    return gamma(top) * rgamma(top - a);
}

double taylor_sum(const TaylorCoefficients& tc, double h) {
    if (!(h >= 0.0)) throw DomainError("taylor_sum: h must be >= 0");
    const double a = tc.alpha.value();
    double sum = tc.coeffs[0];
    for (Eigen::Index k = 1; k < tc.coeffs.size(); ++k) {
        const double ak = a * double(k);
        sum += std::pow(h, ak) * rgamma(1.0 + ak) * tc.coeffs[k];
    }
    return sum;
}

}  // namespace fracmoc
