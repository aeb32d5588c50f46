#include <type_traits>

#include "fracmoc/expr.hpp"
#include "fracmoc/gamma.hpp"

namespace fracmoc::expr {

namespace {

// F'(u) for the elementary functions; gamma is not differentiable here since
// the grammar has no digamma.
Expr outer_derivative(Func fn, const Expr& u, const Expr& whole) {
    switch (fn) {
        case Func::Sin: return call(Func::Cos, u);
        case Func::Cos: return neg(call(Func::Sin, u));
        case Func::Exp: return call(Func::Exp, u);
        case Func::Ln: return div(constant(1.0), u);
        case Func::Sqrt: return div(constant(1.0), mul(constant(2.0), call(Func::Sqrt, u)));
        case Func::Gamma: break;
    }
    throw PatternError("cannot differentiate '" + print(whole) + "': gamma of a variable argument");
}

}  // namespace

Expr diff_classical(const Expr& e, Var v) {
    if (!depends_on(e, v)) return constant(0.0);
    return std::visit(
        [&](const auto& n) -> Expr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return constant(0.0);
            } else if constexpr (std::is_same_v<T, Variable>) {
                return constant(n.var == v ? 1.0 : 0.0);
            } else if constexpr (std::is_same_v<T, Negate>) {
                return neg(diff_classical(n.arg, v));
            } else if constexpr (std::is_same_v<T, Binary>) {
                const Expr& a = n.lhs;
                const Expr& b = n.rhs;
                switch (n.op) {
                    case BinaryOp::Add: return add(diff_classical(a, v), diff_classical(b, v));
                    case BinaryOp::Sub: return sub(diff_classical(a, v), diff_classical(b, v));
                    case BinaryOp::Mul:
                        return add(mul(diff_classical(a, v), b), mul(a, diff_classical(b, v)));
                    case BinaryOp::Div:
                        if (!depends_on(b, v)) return div(diff_classical(a, v), b);
                        return div(sub(mul(diff_classical(a, v), b), mul(a, diff_classical(b, v))),
                                   pow(b, constant(2.0)));
                    case BinaryOp::Pow:
                        if (!depends_on(b, v))
                            return mul(mul(b, pow(a, sub(b, constant(1.0)))), diff_classical(a, v));
                        // u^w (w' ln u + w u'/u)
                        return mul(e, add(mul(diff_classical(b, v), call(Func::Ln, a)),
                                          div(mul(b, diff_classical(a, v)), a)));
                }
                return constant(0.0);
            } else {
                return mul(outer_derivative(n.fn, n.arg, e), diff_classical(n.arg, v));
            }
        },
        e.node().value);
}

namespace {

// D^a v^b = G(1+b)/G(1+b-a) v^(b-a); for a = 1 the classical b v^(b-1).
Expr power_rule(const Expr& base, const Expr& exponent_in, double a) {
    Expr exponent = exponent_in;
    if (!as_constant(exponent) && !depends_on(exponent, Var::X) && !depends_on(exponent, Var::T) &&
        !depends_on(exponent, Var::Z)) {
        exponent = constant(eval(exponent, Bindings{}));
    }
    if (a == 1.0) return mul(exponent, pow(base, sub(exponent, constant(1.0))));
    if (const auto* c = as_constant(exponent)) {
        if (c->value == 0.0) return constant(0.0);
        if (is_gamma_pole(1.0 + c->value))
            throw PatternError("power rule undefined for exponent " + print(exponent) + ": gamma pole");
        if (is_gamma_pole(1.0 + c->value - a)) return constant(0.0);
    }
    const Expr one = constant(1.0);
    const Expr coeff =
        div(call(Func::Gamma, add(one, exponent)), call(Func::Gamma, sub(add(one, exponent), constant(a))));
    return mul(coeff, pow(base, sub(exponent, constant(a))));
}

Expr jumarie(const Expr& e, Var v, double a) {
    if (!depends_on(e, v)) return constant(0.0);
    return std::visit(
        [&](const auto& n) -> Expr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return constant(0.0);
            } else if constexpr (std::is_same_v<T, Variable>) {
                return power_rule(e, constant(1.0), a);
            } else if constexpr (std::is_same_v<T, Negate>) {
                return neg(jumarie(n.arg, v, a));
            } else if constexpr (std::is_same_v<T, Binary>) {
                const Expr& l = n.lhs;
                const Expr& r = n.rhs;
                const bool dl = depends_on(l, v);
                const bool dr = depends_on(r, v);
                switch (n.op) {
                    case BinaryOp::Add: return add(jumarie(l, v, a), jumarie(r, v, a));
                    case BinaryOp::Sub: return sub(jumarie(l, v, a), jumarie(r, v, a));
                    case BinaryOp::Mul:
                        if (dl && dr)
                            throw PatternError("unsupported pattern '" + print(e) +
                                               "': both factors depend on " + std::string(name(v)));
                        return dl ? mul(jumarie(l, v, a), r) : mul(l, jumarie(r, v, a));
                    case BinaryOp::Div:
                        if (dr)
                            throw PatternError("unsupported pattern '" + print(e) + "': divisor depends on " +
                                               std::string(name(v)));
                        return div(jumarie(l, v, a), r);
                    case BinaryOp::Pow:
                        if (dr)
                            throw PatternError("unsupported pattern '" + print(e) + "': exponent depends on " +
                                               std::string(name(v)));
                        if (std::holds_alternative<Variable>(l.node().value)) return power_rule(l, r, a);
                        // chain rule with F(u) = u^r
                        return mul(mul(r, pow(l, sub(r, constant(1.0)))), jumarie(l, v, a));
                }
                return constant(0.0);
            } else {
                return mul(outer_derivative(n.fn, n.arg, e), jumarie(n.arg, v, a));
            }
        },
        e.node().value);
}

}  // namespace

Expr jumarie_derivative(const Expr& e, Var v, Order alpha) { return jumarie(e, v, alpha.value()); }

}  // namespace fracmoc::expr
