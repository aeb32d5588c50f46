#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <optional>
#include <utility>

#include "fracmoc/expr.hpp"
#include "fracmoc/field.hpp"
#include "fracmoc/gamma.hpp"
#include "fracmoc/order.hpp"

namespace fracmoc {

struct Domain {
    double x_min, x_max, t_min, t_max;

    bool contains(double x, double t, double tol = 1e-12) const {
        return x >= x_min - tol && x <= x_max + tol && t >= t_min - tol && t <= t_max + tol;
    }
};

// a(x,t) D^beta_x u + b(x,t) D^alpha_t u = c(x,t), u(x, 0) = phi(x).
class FpdeProblem {
public:
    // Validates the domain and that b > 0 along the line t = t_min.
    // `phi` may be empty for problems without initial data (similarity form).
    FpdeProblem(Order alpha, Order beta, expr::Expr a, expr::Expr b, expr::Expr c, expr::Expr phi, Domain domain);

    Order alpha() const { return alpha_; }
    Order beta() const { return beta_; }
    const expr::Expr& a() const { return a_; }
    const expr::Expr& b() const { return b_; }
    const expr::Expr& c() const { return c_; }
    const expr::Expr& phi() const { return phi_; }
    bool has_initial_data() const { return static_cast<bool>(phi_); }
    const Domain& domain() const { return domain_; }

private:
    Order alpha_;
    Order beta_;
    expr::Expr a_, b_, c_, phi_;
    Domain domain_;
};

// D^alpha_t u + speed D^beta_x u = 0.
FpdeProblem transport_problem(Order alpha, Order beta, double speed, expr::Expr phi, Domain domain);

// T D^alpha_t u + X D^beta_x u = 0 with X, T the transformed coordinates.
FpdeProblem similarity_problem(Order alpha, Order beta, Domain domain);

// x^o / Gamma(1 + o).
template <typename Scalar>
Scalar to_transformed(Scalar x, Order o) {
    using std::pow;
    if (!(x >= Scalar(0))) throw DomainError("transform: coordinate must be >= 0");
    return pow(x, Scalar(o.value())) / gamma(Scalar(1) + Scalar(o.value()));
}

// (Gamma(1 + o) X)^(1/o).
template <typename Scalar>
Scalar from_transformed(Scalar X, Order o) {
    using std::pow;
    if (!(X >= Scalar(0))) throw DomainError("inverse transform: coordinate must be >= 0");
    return pow(gamma(Scalar(1) + Scalar(o.value())) * X, Scalar(1) / Scalar(o.value()));
}

struct TransformedPoint {
    double X;
    double T;
};

TransformedPoint transform(double x, double t, Order alpha, Order beta);
std::pair<double, double> inverse_transform(TransformedPoint p, Order alpha, Order beta);

// State (X, T, u) of the characteristic system in transformed coordinates.
using CharState = Eigen::Vector3d;

// (dX/ds, dT/ds, du/ds) = (a, b, c) evaluated at the original coordinates.
CharState characteristic_rhs(const FpdeProblem& prob, const CharState& state);

struct CharacteristicCurve {
    // One row per sample: s, X, T, u.
    Eigen::Matrix<double, Eigen::Dynamic, 4> samples;
    double step = 0.0;

    Eigen::Index size() const { return samples.rows(); }
};

struct IntegratorOptions {
    double blowup_bound = 1e12;
};

// Classical RK4 from s0 to s1 (either direction); the last step is shortened
// to land on s1.
CharacteristicCurve integrate_characteristic(const FpdeProblem& prob, const CharState& start, double s0, double s1,
                                             double step, const IntegratorOptions& opts = {});

struct TraceResult {
    double x0;        // foot point on t = 0
    double u_change;  // integral of c along the characteristic
};

// Follows the characteristic through (x, t) backward to t = 0.
TraceResult trace_to_initial_line(const FpdeProblem& prob, double x, double t, double step = 1e-3);

// phi(x0) + accumulated source.
double solve_at(const FpdeProblem& prob, double x, double t, double step = 1e-3);

class Solution {
public:
    enum class Kind { Traced, ConstantCoeff, Similarity };
    using Evaluator = std::function<double(double, double)>;

    Solution(FpdeProblem prob, Kind kind, Evaluator eval, std::optional<expr::Expr> profile = std::nullopt)
        : problem_(std::move(prob)), kind_(kind), eval_(std::move(eval)), profile_(std::move(profile)) {}

    double operator()(double x, double t) const { return eval_(x, t); }

    const FpdeProblem& problem() const { return problem_; }
    Kind kind() const { return kind_; }
    const std::optional<expr::Expr>& profile() const { return profile_; }

private:
    FpdeProblem problem_;
    Kind kind_;
    Evaluator eval_;
    std::optional<expr::Expr> profile_;
};

Solution traced_solution(const FpdeProblem& prob, double step = 1e-3);

// u = phi(x0) with X(x0) = X(x) - speed T(t); refuses points whose foot lies
// left of x = 0.
Solution solve_constant_coeff(const FpdeProblem& prob);

// u = f(X(x) - speed T(t)) for an explicit profile f(z).
Solution solve_constant_coeff(const FpdeProblem& prob, const expr::Expr& profile_f);

// u = f(X(x) / T(t)); singular at t = 0.
Solution solve_similarity(const FpdeProblem& prob, const expr::Expr& profile_f);

// Pointwise evaluation; failures become missing entries.
Field solve_grid(const Solution& sol, const Eigen::VectorXd& x_grid, const Eigen::VectorXd& t_grid);

}  // namespace fracmoc
