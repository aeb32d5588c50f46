#pragma once

// Test-only reference values computed independently of the library.

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>

namespace oracle {

inline double gamma(double z) { return boost::math::tgamma(z); }

// Gamma(1 + b) / Gamma(1 + b - a).
inline double power_rule(double b, double a) { return gamma(1.0 + b) / gamma(1.0 + b - a); }

// I^a x^g = Gamma(g + 1) / Gamma(g + 1 + a) x^(g + a).
inline double rl_monomial(double g, double a, double x) {
    return gamma(g + 1.0) / gamma(g + 1.0 + a) * std::pow(x, g + a);
}

inline const double sqrt_pi = std::sqrt(std::numbers::pi);

}  // namespace oracle
