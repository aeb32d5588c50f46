#include "fracmoc/charsolve.hpp"

#include <string>
#include <vector>

namespace fracmoc {

using expr::Bindings;
using expr::Expr;
using expr::Var;

FpdeProblem::FpdeProblem(Order alpha, Order beta, Expr a, Expr b, Expr c, Expr phi, Domain domain)
    : alpha_(alpha), beta_(beta), a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), phi_(std::move(phi)),
      domain_(domain) {
    if (!a_ || !b_ || !c_) throw PatternError("problem needs coefficient expressions a, b and c");
    if (!(domain_.x_min < domain_.x_max) || !(domain_.t_min < domain_.t_max))
        throw DomainError("problem domain is degenerate");
    if (domain_.x_min < 0.0 || domain_.t_min < 0.0) throw DomainError("problem domain must satisfy x, t >= 0");
    constexpr int kSamples = 17;
    for (int i = 0; i < kSamples; ++i) {
        const double x = domain_.x_min + (domain_.x_max - domain_.x_min) * i / (kSamples - 1);
        double bv = 0.0;
        try {
            bv = expr::eval(b_, x, domain_.t_min);
        } catch (const EvalError& e) {
            throw PatternError(std::string("coefficient b cannot be evaluated on the initial line: ") + e.what());
        }
        if (!(bv > 0.0))
            throw PatternError("coefficient b must be positive on the line t = " + format_number(domain_.t_min) +
                               " (b(" + format_number(x) + ") = " + format_number(bv) + ")");
    }
}

FpdeProblem transport_problem(Order alpha, Order beta, double speed, Expr phi, Domain domain) {
    return FpdeProblem(alpha, beta, expr::constant(speed), expr::constant(1.0), expr::constant(0.0), std::move(phi),
                       domain);
}

FpdeProblem similarity_problem(Order alpha, Order beta, Domain domain) {
    using expr::BinaryOp;
    using expr::binary;
    using expr::call;
    using expr::constant;
    using expr::Func;
    auto scaled_power = [](Var v, Order o) {
        return binary(BinaryOp::Div, binary(BinaryOp::Pow, expr::variable(v), constant(o.value())),
                      call(Func::Gamma, constant(1.0 + o.value())));
    };
    return FpdeProblem(alpha, beta, scaled_power(Var::X, beta), scaled_power(Var::T, alpha), constant(0.0), Expr{},
                       domain);
}

TransformedPoint transform(double x, double t, Order alpha, Order beta) {
    return {to_transformed(x, beta), to_transformed(t, alpha)};
}

std::pair<double, double> inverse_transform(TransformedPoint p, Order alpha, Order beta) {
    return {from_transformed(p.X, beta), from_transformed(p.T, alpha)};
}

CharState characteristic_rhs(const FpdeProblem& prob, const CharState& state) {
    const auto [x, t] = inverse_transform({state[0], state[1]}, prob.alpha(), prob.beta());
    const Bindings at{x, t, 0.0};
    return {expr::eval(prob.a(), at), expr::eval(prob.b(), at), expr::eval(prob.c(), at)};
}

namespace {

CharState rk4_step(const FpdeProblem& prob, const CharState& y, double h) {
    const CharState k1 = characteristic_rhs(prob, y);
    const CharState k2 = characteristic_rhs(prob, y + 0.5 * h * k1);
    const CharState k3 = characteristic_rhs(prob, y + 0.5 * h * k2);
    const CharState k4 = characteristic_rhs(prob, y + h * k3);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// RK4 step used while tracing: nullopt when a stage crosses below T = 0,
// TraceError when a stage leaves X >= 0.
std::optional<CharState> trace_step(const FpdeProblem& prob, const CharState& y, double h) {
    auto rhs = [&](const CharState& s) -> std::optional<CharState> {
        if (s[1] < 0.0) return std::nullopt;
        if (s[0] < 0.0) throw TraceError("characteristic left the domain (x < 0) before reaching t = 0");
        return characteristic_rhs(prob, s);
    };
    const auto k1 = rhs(y);
    if (!k1) return std::nullopt;
    const auto k2 = rhs(y + 0.5 * h * *k1);
    if (!k2) return std::nullopt;
    const auto k3 = rhs(y + 0.5 * h * *k2);
    if (!k3) return std::nullopt;
    const auto k4 = rhs(y + h * *k3);
    if (!k4) return std::nullopt;
    return y + (h / 6.0) * (*k1 + 2.0 * *k2 + 2.0 * *k3 + *k4);
}

}  // namespace

CharacteristicCurve integrate_characteristic(const FpdeProblem& prob, const CharState& start, double s0, double s1,
                                             double step, const IntegratorOptions& opts) {
    if (!(step > 0.0)) throw DomainError("integrate_characteristic: step must be > 0");
    if (s0 == s1) throw DomainError("integrate_characteristic: empty parameter span");
    const double dir = s1 > s0 ? 1.0 : -1.0;
    std::vector<Eigen::Matrix<double, 1, 4>> rows;
    CharState y = start;
    double s = s0;
    rows.push_back({s, y[0], y[1], y[2]});
    while (dir * (s1 - s) > 0.0) {
        double h = step;
        bool last = false;
        // Shorten the final step; also absorb a sliver smaller than 1e-9 steps.
        if (dir * (s1 - s) <= step * (1.0 + 1e-9)) {
            h = dir * (s1 - s);
            last = true;
        }
        y = rk4_step(prob, y, dir * h);
        s = last ? s1 : s + dir * h;
        if (!y.allFinite() || y.cwiseAbs().maxCoeff() > opts.blowup_bound)
            throw TraceError("characteristic blew up at s = " + format_number(s));
        rows.push_back({s, y[0], y[1], y[2]});
    }
    CharacteristicCurve curve;
    curve.step = step;
    curve.samples.resize(static_cast<Eigen::Index>(rows.size()), 4);
    for (std::size_t i = 0; i < rows.size(); ++i) curve.samples.row(static_cast<Eigen::Index>(i)) = rows[i];
    return curve;
}

TraceResult trace_to_initial_line(const FpdeProblem& prob, double x, double t, double step) {
    if (!(step > 0.0)) throw DomainError("trace: step must be > 0");
    const Domain& dom = prob.domain();
    if (!dom.contains(x, t)) throw DomainError("trace: point lies outside the problem domain");
    if (t == 0.0) return {x, 0.0};
    if (!(t > 0.0)) throw DomainError("trace: t must be > 0");

    constexpr double kEventTol = 1e-12;
    constexpr long kMaxSteps = 50'000'000;
    const double x_lo = to_transformed(dom.x_min, prob.beta()) - kEventTol;
    const double x_hi = to_transformed(dom.x_max, prob.beta()) + kEventTol;

    const TransformedPoint p = transform(x, t, prob.alpha(), prob.beta());
    CharState y(p.X, p.T, 0.0);
    if (!(characteristic_rhs(prob, y)[1] > 0.0))
        throw TraceError("trace: coefficient b is not positive at the query point; T does not decrease backward");

    auto accept = [&](const CharState& next) {
        if (!(next[1] < y[1])) throw TraceError("trace: T failed to decrease (coefficient b changed sign)");
        if (next[0] < x_lo || next[0] > x_hi)
            throw TraceError("trace: characteristic left the domain before reaching t = 0");
        y = next;
    };

    bool landed = false;
    for (long n = 0; n < kMaxSteps && !landed; ++n) {
        const auto trial = trace_step(prob, y, -step);
        if (trial && (*trial)[1] > kEventTol) {
            accept(*trial);
            continue;
        }
        if (trial && (*trial)[1] >= 0.0) {
            accept(*trial);
            landed = true;
            break;
        }
        // Overshoot: bisect the step length for the T = 0 crossing.
        double lo = 0.0;
        double hi = step;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            const auto r = trace_step(prob, y, -mid);
            if (!r || (*r)[1] < 0.0) {
                hi = mid;
            } else if ((*r)[1] > kEventTol) {
                lo = mid;
            } else {
                accept(*r);
                landed = true;
                break;
            }
        }
        if (!landed) throw TraceError("trace: failed to locate the t = 0 crossing");
    }
    if (!landed) throw TraceError("trace: characteristic did not reach t = 0");
    if (y[1] > 0.0) {
        // Close the remaining sub-tolerance gap with one linear step onto T = 0.
        const CharState slope = characteristic_rhs(prob, y);
        if (slope[1] > 0.0) y -= (y[1] / slope[1]) * slope;
        y[1] = 0.0;
    }

    const double x0 = from_transformed(std::max(y[0], 0.0), prob.beta());
    if (!(expr::eval(prob.b(), x0, 0.0) > 0.0))
        throw TraceError("trace: coefficient b vanishes on the initial line; characteristics do not reach t = 0");
    return {x0, -y[2]};
}

double solve_at(const FpdeProblem& prob, double x, double t, double step) {
    if (!prob.has_initial_data()) throw PatternError("solve_at: problem has no initial data phi");
    const TraceResult r = trace_to_initial_line(prob, x, t, step);
    return expr::eval(prob.phi(), r.x0) + r.u_change;
}

Solution traced_solution(const FpdeProblem& prob, double step) {
    return Solution(prob, Solution::Kind::Traced, [prob, step](double x, double t) { return solve_at(prob, x, t, step); });
}

namespace {

double transport_speed(const FpdeProblem& prob) {
    const Var vars[] = {Var::X, Var::T, Var::Z};
    for (const auto* e : {&prob.a(), &prob.b(), &prob.c()})
        for (Var v : vars)
            if (expr::depends_on(*e, v))
                throw PatternError("constant-coefficient solver needs constant a, b, c; '" + expr::print(*e) +
                                   "' depends on " + std::string(expr::name(v)));
    const double a = expr::eval(prob.a(), 0.0);
    const double b = expr::eval(prob.b(), 0.0);
    const double c = expr::eval(prob.c(), 0.0);
    if (c != 0.0) throw PatternError("constant-coefficient solver needs c = 0");
    if (!(b > 0.0)) throw PatternError("constant-coefficient solver needs b > 0");
    return a / b;
}

void check_similarity_pattern(const FpdeProblem& prob) {
    const Domain& d = prob.domain();
    const Order alpha = prob.alpha();
    const Order beta = prob.beta();
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            const double x = d.x_min + (d.x_max - d.x_min) * i / 4.0;
            const double t = std::max(d.t_min + (d.t_max - d.t_min) * j / 4.0, 1e-3 * d.t_max);
            const double X = to_transformed(x, beta);
            const double T = to_transformed(t, alpha);
            const double av = expr::eval(prob.a(), x, t);
            const double bv = expr::eval(prob.b(), x, t);
            const double cv = expr::eval(prob.c(), x, t);
            const auto close = [](double u, double v) { return std::abs(u - v) <= 1e-12 * std::max(1.0, std::abs(v)); };
            if (!close(av, X) || !close(bv, T) || cv != 0.0)
                throw PatternError("similarity solver needs a = x^beta/Gamma(1+beta), b = t^alpha/Gamma(1+alpha), c = 0");
        }
    }
}

}  // namespace

Solution solve_constant_coeff(const FpdeProblem& prob) {
    if (!prob.has_initial_data()) throw PatternError("solve_constant_coeff: problem has no initial data phi");
    const double speed = transport_speed(prob);
    auto eval = [prob, speed](double x, double t) {
        if (t == 0.0) return expr::eval(prob.phi(), x);
        const double z = to_transformed(x, prob.beta()) - speed * to_transformed(t, prob.alpha());
        if (z < 0.0)
            throw DomainError("profile argument X - cT = " + format_number(z) +
                              " is negative; foot point lies outside x >= 0");
        return expr::eval(prob.phi(), from_transformed(z, prob.beta()));
    };
    return Solution(prob, Solution::Kind::ConstantCoeff, eval);
}

Solution solve_constant_coeff(const FpdeProblem& prob, const Expr& profile_f) {
    const double speed = transport_speed(prob);
    auto eval = [prob, speed, profile_f](double x, double t) {
        const double z = to_transformed(x, prob.beta()) - speed * to_transformed(t, prob.alpha());
        return expr::eval(profile_f, Bindings{0.0, 0.0, z});
    };
    return Solution(prob, Solution::Kind::ConstantCoeff, eval, profile_f);
}

Solution solve_similarity(const FpdeProblem& prob, const Expr& profile_f) {
    check_similarity_pattern(prob);
    auto eval = [prob, profile_f](double x, double t) {
        if (!(t > 0.0)) throw DomainError("similarity solution is singular at t = 0");
        const double z = to_transformed(x, prob.beta()) / to_transformed(t, prob.alpha());
        return expr::eval(profile_f, Bindings{0.0, 0.0, z});
    };
    return Solution(prob, Solution::Kind::Similarity, eval, profile_f);
}

Field solve_grid(const Solution& sol, const Eigen::VectorXd& x_grid, const Eigen::VectorXd& t_grid) {
    const Domain& d = sol.problem().domain();
    for (double x : x_grid)
        if (!d.contains(x, d.t_min)) throw DomainError("x-grid leaves the problem domain");
    for (double t : t_grid)
        if (!d.contains(d.x_min, t)) throw DomainError("t-grid leaves the problem domain");
    Field field(x_grid, t_grid);
    for (Eigen::Index j = 0; j < t_grid.size(); ++j) {
        for (Eigen::Index i = 0; i < x_grid.size(); ++i) {
            try {
                field.values(i, j) = sol(x_grid[i], t_grid[j]);
            } catch (const Error& e) {
                field.record_missing("(" + format_number(x_grid[i]) + ", " + format_number(t_grid[j]) +
                                     "): " + e.what());
            }
        }
    }
    return field;
}

}  // namespace fracmoc
