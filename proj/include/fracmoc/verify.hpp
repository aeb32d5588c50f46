#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

#include "fracmoc/charsolve.hpp"
#include "fracmoc/field.hpp"
#include "fracmoc/frcalc.hpp"

namespace fracmoc {

enum class ResidualMethod { Quadrature, GlDifference, TransformedClassical };

struct ResidualReport {
    Field field;
    double max_abs = 0.0;
    double l2 = 0.0;  // root mean square over the non-missing entries
    std::size_t points_skipped = 0;
    ResidualMethod method = ResidualMethod::Quadrature;
};

// Fills max_abs / l2 / points_skipped from the field entries.
void summarize(ResidualReport& report);

struct ResidualOptions {
    QuadratureConfig quadrature{};
    double gl_step = 1e-4;  // h for the GlDifference method
};

// a D^beta_x u + b D^alpha_t u - c on the grid, with both fractional
// derivatives taken numerically along slices of the solution from the lower
// terminal 0. The solution evaluator is re-sampled at quadrature nodes.
ResidualReport residual_fpde(const Solution& sol, const FpdeProblem& prob, const Eigen::VectorXd& x_grid,
                             const Eigen::VectorXd& t_grid, ResidualMethod method,
                             const ResidualOptions& opts = {});

// a U_X + b U_T - c for U(X, T) = u(inverse transform), by second-order
// central differences with the grid spacing. The report's grid holds X, T.
ResidualReport residual_transformed(const Solution& sol, const FpdeProblem& prob, const Eigen::VectorXd& X_grid,
                                    const Eigen::VectorXd& T_grid);

// max |I^a D^a f (x) - (f(x) - f(0))| over the points.
double fundamental_check(const ScalarFn& f, Order alpha, std::span<const double> x_points,
                         const QuadratureConfig& cfg = {});

// |I^a(D^a u * v)(b) - [(uv)(b) - (uv)(0) - I^a(u * D^a v)(b)]| on [0, b].
double parts_check(const ScalarFn& u, const ScalarFn& v, Order alpha, double b_hi, const QuadratureConfig& cfg = {});

struct MethodComparison {
    double x;
    double quadrature;
    double gl;       // estimate at the smallest step
    double gap;      // |quadrature - gl| at the smallest step
    double order;    // least-squares slope of log gap against log h; NaN if a gap vanishes
    Eigen::VectorXd gaps;
};

std::vector<MethodComparison> compare_methods(const ScalarFn& f, Order alpha, std::span<const double> x_points,
                                              std::span<const double> h_sequence, const QuadratureConfig& cfg = {});

}  // namespace fracmoc
