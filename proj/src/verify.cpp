#include "fracmoc/verify.hpp"

#include <cmath>
#include <limits>

namespace fracmoc {

void summarize(ResidualReport& report) {
    double max_abs = 0.0;
    double sum_sq = 0.0;
    std::size_t count = 0;
    std::size_t skipped = 0;
    for (Eigen::Index j = 0; j < report.field.values.cols(); ++j) {
        for (Eigen::Index i = 0; i < report.field.values.rows(); ++i) {
            const double v = report.field.values(i, j);
            if (Field::is_missing(v)) {
                ++skipped;
                continue;
            }
            max_abs = std::max(max_abs, std::abs(v));
            sum_sq += v * v;
            ++count;
        }
    }
    report.max_abs = max_abs;
    report.l2 = count ? std::sqrt(sum_sq / double(count)) : 0.0;
    report.points_skipped = skipped;
}

namespace {

int gl_terms(double x, double h) { return static_cast<int>(std::ceil(x / h)) + 2; }

double fractional_slice_derivative(const ScalarFn& f, Order order, double at, ResidualMethod method,
                                   const ProductRule<double>& rule, double gl_step) {
    if (method == ResidualMethod::GlDifference) {
        return gl_difference(f, order, at, gl_step, gl_terms(at, gl_step)) / std::pow(gl_step, order.value());
    }
    return mrl_derivative(f, order, at, rule);
}

// D^a g at xi, with the xi -> 0 limit 0 that holds for C^1 g and a < 1.
double derivative_or_limit(const ScalarFn& g, Order alpha, double xi, const ProductRule<double>& rule) {
    if (xi == 0.0 && !alpha.is_classical()) return 0.0;
    return mrl_derivative(g, alpha, xi, rule);
}

}  // namespace

ResidualReport residual_fpde(const Solution& sol, const FpdeProblem& prob, const Eigen::VectorXd& x_grid,
                             const Eigen::VectorXd& t_grid, ResidualMethod method, const ResidualOptions& opts) {
    if (method == ResidualMethod::TransformedClassical)
        throw DomainError("residual_fpde: use residual_transformed for the transformed-classical method");
    const Order alpha = prob.alpha();
    const Order beta = prob.beta();
    const auto x_rule = make_product_rule(1.0 - beta.value() > 0.0 ? 1.0 - beta.value() : 1.0, opts.quadrature);
    const auto t_rule = make_product_rule(1.0 - alpha.value() > 0.0 ? 1.0 - alpha.value() : 1.0, opts.quadrature);

    ResidualReport report;
    report.method = method;
    report.field = Field(x_grid, t_grid);
    for (Eigen::Index j = 0; j < t_grid.size(); ++j) {
        const double t = t_grid[j];
        const ScalarFn x_slice([&sol, t](double xi) { return sol(xi, t); });
        for (Eigen::Index i = 0; i < x_grid.size(); ++i) {
            const double x = x_grid[i];
            try {
                const ScalarFn t_slice([&sol, x](double tau) { return sol(x, tau); });
                const double dx = fractional_slice_derivative(x_slice, beta, x, method, x_rule, opts.gl_step);
                const double dt = fractional_slice_derivative(t_slice, alpha, t, method, t_rule, opts.gl_step);
                const expr::Bindings at{x, t, 0.0};
                report.field.values(i, j) = expr::eval(prob.a(), at) * dx + expr::eval(prob.b(), at) * dt -
                                            expr::eval(prob.c(), at);
            } catch (const Error& e) {
                report.field.record_missing("(" + format_number(x) + ", " + format_number(t) + "): " + e.what());
            }
        }
    }
    summarize(report);
    return report;
}

ResidualReport residual_transformed(const Solution& sol, const FpdeProblem& prob, const Eigen::VectorXd& X_grid,
                                    const Eigen::VectorXd& T_grid) {
    const Order alpha = prob.alpha();
    const Order beta = prob.beta();
    auto spacing = [](const Eigen::VectorXd& g) {
        return g.size() > 1 ? (g[g.size() - 1] - g[0]) / double(g.size() - 1) : 1e-3;
    };
    const double hX = spacing(X_grid);
    const double hT = spacing(T_grid);
    auto U = [&](double X, double T) {
        const auto [x, t] = inverse_transform({X, T}, alpha, beta);
        return sol(x, t);
    };

    ResidualReport report;
    report.method = ResidualMethod::TransformedClassical;
    report.field = Field(X_grid, T_grid);
    for (Eigen::Index j = 0; j < T_grid.size(); ++j) {
        for (Eigen::Index i = 0; i < X_grid.size(); ++i) {
            const double X = X_grid[i];
            const double T = T_grid[j];
            try {
                const double UX = (U(X + hX, T) - U(X - hX, T)) / (2.0 * hX);
                const double UT = (U(X, T + hT) - U(X, T - hT)) / (2.0 * hT);
                const auto [x, t] = inverse_transform({X, T}, alpha, beta);
                const expr::Bindings at{x, t, 0.0};
                report.field.values(i, j) =
                    expr::eval(prob.a(), at) * UX + expr::eval(prob.b(), at) * UT - expr::eval(prob.c(), at);
            } catch (const Error& e) {
                report.field.record_missing("(" + format_number(X) + ", " + format_number(T) + "): " + e.what());
            }
        }
    }
    summarize(report);
    return report;
}

double fundamental_check(const ScalarFn& f, Order alpha, std::span<const double> x_points,
                         const QuadratureConfig& cfg) {
    const auto inner = make_product_rule(alpha.is_classical() ? 1.0 : 1.0 - alpha.value(), cfg);
    const auto outer = make_product_rule(alpha.value(), cfg);
    const ScalarFn derivative([&](double xi) { return derivative_or_limit(f, alpha, xi, inner); });
    const double f0 = f.value_at_zero();
    double worst = 0.0;
    for (double x : x_points) {
        const double lhs = rl_integral(derivative, alpha, x, outer);
        worst = std::max(worst, std::abs(lhs - (f(x) - f0)));
    }
    return worst;
}

double parts_check(const ScalarFn& u, const ScalarFn& v, Order alpha, double b_hi, const QuadratureConfig& cfg) {
    if (!(b_hi >= 0.0)) throw DomainError("parts_check: upper limit must be >= 0");
    const auto inner = make_product_rule(alpha.is_classical() ? 1.0 : 1.0 - alpha.value(), cfg);
    const auto outer = make_product_rule(alpha.value(), cfg);
    const ScalarFn du_v([&](double xi) { return derivative_or_limit(u, alpha, xi, inner) * v(xi); });
    const ScalarFn u_dv([&](double xi) { return u(xi) * derivative_or_limit(v, alpha, xi, inner); });
    const double lhs = rl_integral(du_v, alpha, b_hi, outer);
    const double rhs = u(b_hi) * v(b_hi) - u(0.0) * v(0.0) - rl_integral(u_dv, alpha, b_hi, outer);
    return std::abs(lhs - rhs);
}

std::vector<MethodComparison> compare_methods(const ScalarFn& f, Order alpha, std::span<const double> x_points,
                                              std::span<const double> h_sequence, const QuadratureConfig& cfg) {
    if (h_sequence.empty()) throw DomainError("compare_methods: empty step sequence");
    const auto rule = make_product_rule(alpha.is_classical() ? 1.0 : 1.0 - alpha.value(), cfg);
    const double a = alpha.value();
    const auto n = static_cast<Eigen::Index>(h_sequence.size());
    std::vector<MethodComparison> rows;
    for (double x : x_points) {
        MethodComparison row{x, mrl_derivative(f, alpha, x, rule), 0.0, 0.0,
                             std::numeric_limits<double>::quiet_NaN(), Eigen::VectorXd(n)};
        for (Eigen::Index k = 0; k < n; ++k) {
            const double h = h_sequence[k];
            row.gl = gl_difference(f, alpha, x, h, gl_terms(x, h)) / std::pow(h, a);
            row.gaps[k] = std::abs(row.quadrature - row.gl);
        }
        row.gap = row.gaps[n - 1];
        if (n >= 2 && (row.gaps.array() > 0.0).all()) {
            Eigen::VectorXd lh(n), lg(n);
            for (Eigen::Index k = 0; k < n; ++k) {
                lh[k] = std::log(h_sequence[k]);
                lg[k] = std::log(row.gaps[k]);
            }
            const double mh = lh.mean();
            const double mg = lg.mean();
            row.order = ((lh.array() - mh) * (lg.array() - mg)).sum() / (lh.array() - mh).square().sum();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace fracmoc
