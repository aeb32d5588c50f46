#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>

#include "fracmoc/errors.hpp"

namespace fracmoc {

enum class QuadratureScheme { ProductTrapezoid, ProductMidpoint };

// Substitution grades the mesh as s = w^2 so that integrands behaving like
// s^p (p > 0) near the left terminal keep second-order accuracy. Direct uses
// a uniform mesh.
enum class SingularityHandling { Substitution, Direct };

struct QuadratureConfig {
    int n_panels = 4096;
    QuadratureScheme scheme = QuadratureScheme::ProductTrapezoid;
    SingularityHandling singularity = SingularityHandling::Substitution;

    void validate() const {
        if (n_panels < 2)
            throw DomainError("quadrature needs n_panels >= 2, got " + std::to_string(n_panels));
    }
};

// Product rule on [0, 1] for the weight (1 - s)^(kernel_exponent - 1):
//
//   int_0^1 (1 - s)^(g - 1) h(s) ds  ~=  weights . h(nodes)
//
// The weights integrate the kernel exactly against the piecewise-linear
// (trapezoid) or piecewise-constant (midpoint) interpolant of h.
template <typename Scalar>
struct ProductRule {
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    Scalar kernel_exponent{};
    Vector nodes;
    Vector weights;

    Eigen::Index size() const { return nodes.size(); }

    template <typename F>
    Scalar apply(F&& h) const {
        Vector values(nodes.size());
        for (Eigen::Index j = 0; j < nodes.size(); ++j) values[j] = h(nodes[j]);
        return weights.dot(values);
    }
};

namespace detail {

// (A^q - B^q) / A^q for 0 <= B < A, accurate when B is close to A.
template <typename Scalar>
Scalar relative_power_drop(Scalar a, Scalar b, Scalar q) {
    using std::expm1;
    using std::log1p;
    if (b == Scalar(0)) return Scalar(1);
    return -expm1(q * log1p(-(a - b) / a));
}

template <typename Scalar>
Scalar mesh_point(Eigen::Index j, Eigen::Index n, SingularityHandling handling) {
    const Scalar w = Scalar(j) / Scalar(n);
    return handling == SingularityHandling::Substitution ? w * w : w;
}

}  // namespace detail

template <typename Scalar>
ProductRule<Scalar> make_product_rule(Scalar kernel_exponent, const QuadratureConfig& cfg) {
    using std::pow;
    cfg.validate();
    if (!(kernel_exponent > Scalar(0)))
        throw DomainError("product rule kernel exponent must be positive");

    const Eigen::Index n = cfg.n_panels;
    const Scalar g = kernel_exponent;
    ProductRule<Scalar> rule;
    rule.kernel_exponent = g;

    typename ProductRule<Scalar>::Vector mesh(n + 1);
    for (Eigen::Index j = 0; j <= n; ++j) mesh[j] = detail::mesh_point<Scalar>(j, n, cfg.singularity);
    mesh[n] = Scalar(1);

    if (cfg.scheme == QuadratureScheme::ProductMidpoint) {
        rule.nodes.resize(n);
        rule.weights.resize(n);
        for (Eigen::Index j = 0; j < n; ++j) {
            const Scalar a = Scalar(1) - mesh[j];
            const Scalar b = Scalar(1) - mesh[j + 1];
            rule.nodes[j] = Scalar(0.5) * (mesh[j] + mesh[j + 1]);
            rule.weights[j] = pow(a, g) * detail::relative_power_drop(a, b, g) / g;
        }
        return rule;
    }

    rule.nodes = mesh;
    rule.weights.setZero(n + 1);
    for (Eigen::Index j = 0; j < n; ++j) {
        // In p = 1 - s the panel is [b, a]; h is linear in p there.
        const Scalar a = Scalar(1) - mesh[j];
        const Scalar b = Scalar(1) - mesh[j + 1];
        const Scalar len = a - b;
        const Scalar drop0 = detail::relative_power_drop(a, b, g);
        const Scalar drop1 = detail::relative_power_drop(a, b, g + Scalar(1));
        const Scalar m0 = pow(a, g) * drop0 / g;  // int p^(g-1)
        // a*m0 - int p^g, written to avoid cancellation on short panels.
        const Scalar moment = pow(a, g + Scalar(1)) * (drop0 / g - drop1 / (g + Scalar(1)));
        const Scalar right = moment / len;
        rule.weights[j] += m0 - right;
        rule.weights[j + 1] += right;
    }
    return rule;
}

}  // namespace fracmoc
