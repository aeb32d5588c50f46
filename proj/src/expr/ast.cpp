#include <cmath>
#include <optional>
#include <type_traits>

#include "fracmoc/expr.hpp"

namespace fracmoc::expr {

std::string_view name(Var v) {
    switch (v) {
        case Var::X: return "x";
        case Var::T: return "t";
        case Var::Z: return "z";
    }
    return "?";
}

std::string_view name(Func f) {
    switch (f) {
        case Func::Sin: return "sin";
        case Func::Cos: return "cos";
        case Func::Exp: return "exp";
        case Func::Ln: return "ln";
        case Func::Sqrt: return "sqrt";
        case Func::Gamma: return "gamma";
    }
    return "?";
}

namespace {
Expr make(Node n) { return Expr(std::make_shared<const Node>(std::move(n))); }

bool is_value(const Expr& e, double v) {
    const auto* c = as_constant(e);
    return c && c->value == v;
}

// Folds only when the result is an ordinary finite number.
std::optional<double> fold(BinaryOp op, double a, double b) {
    double r = 0.0;
    switch (op) {
        case BinaryOp::Add: r = a + b; break;
        case BinaryOp::Sub: r = a - b; break;
        case BinaryOp::Mul: r = a * b; break;
        case BinaryOp::Div:
            if (b == 0.0) return std::nullopt;
            r = a / b;
            break;
        case BinaryOp::Pow: r = std::pow(a, b); break;
    }
    if (!std::isfinite(r)) return std::nullopt;
    return r;
}

Expr folded(BinaryOp op, Expr a, Expr b) {
    const auto* ca = as_constant(a);
    const auto* cb = as_constant(b);
    if (ca && cb) {
        if (auto r = fold(op, ca->value, cb->value)) return constant(*r);
    }
    return binary(op, std::move(a), std::move(b));
}
}  // namespace

Expr constant(double v) { return make(Node{Constant{v}}); }
Expr variable(Var v) { return make(Node{Variable{v}}); }
Expr negate(Expr a) { return make(Node{Negate{std::move(a)}}); }
Expr binary(BinaryOp op, Expr lhs, Expr rhs) { return make(Node{Binary{op, std::move(lhs), std::move(rhs)}}); }
Expr call(Func fn, Expr arg) { return make(Node{Call{fn, std::move(arg)}}); }

const Constant* as_constant(const Expr& e) { return std::get_if<Constant>(&e.node().value); }

Expr add(Expr a, Expr b) {
    if (is_value(a, 0.0)) return b;
    if (is_value(b, 0.0)) return a;
    return folded(BinaryOp::Add, std::move(a), std::move(b));
}

Expr sub(Expr a, Expr b) {
    if (is_value(b, 0.0)) return a;
    if (is_value(a, 0.0)) return neg(std::move(b));
    return folded(BinaryOp::Sub, std::move(a), std::move(b));
}

Expr mul(Expr a, Expr b) {
    if (is_value(a, 0.0) || is_value(b, 0.0)) return constant(0.0);
    if (is_value(a, 1.0)) return b;
    if (is_value(b, 1.0)) return a;
    return folded(BinaryOp::Mul, std::move(a), std::move(b));
}

Expr div(Expr a, Expr b) {
    if (is_value(b, 1.0)) return a;
    if (is_value(a, 0.0) && !is_value(b, 0.0)) return constant(0.0);
    return folded(BinaryOp::Div, std::move(a), std::move(b));
}

Expr pow(Expr a, Expr b) {
    if (is_value(b, 1.0)) return a;
    if (is_value(b, 0.0)) return constant(1.0);
    return folded(BinaryOp::Pow, std::move(a), std::move(b));
}

Expr neg(Expr a) {
    if (const auto* c = as_constant(a)) return constant(-c->value);
    if (const auto* n = std::get_if<Negate>(&a.node().value)) return n->arg;
    return negate(std::move(a));
}

bool depends_on(const Expr& e, Var v) {
    return std::visit(
        [&](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return false;
            } else if constexpr (std::is_same_v<T, Variable>) {
                return n.var == v;
            } else if constexpr (std::is_same_v<T, Negate>) {
                return depends_on(n.arg, v);
            } else if constexpr (std::is_same_v<T, Binary>) {
                return depends_on(n.lhs, v) || depends_on(n.rhs, v);
            } else {
                return depends_on(n.arg, v);
            }
        },
        e.node().value);
}

ScalarFn bind(const Expr& e, Var v, Bindings fixed) {
    auto at = [fixed, v](double s) {
        Bindings b = fixed;
        switch (v) {
            case Var::X: b.x = s; break;
            case Var::T: b.t = s; break;
            case Var::Z: b.z = s; break;
        }
        return b;
    };
    auto value = [e, at](double s) { return eval(e, at(s)); };
    try {
        auto d = diff_classical(e, v);
        return ScalarFn(value, [d, at](double s) { return eval(d, at(s)); });
    } catch (const PatternError&) {
        return ScalarFn(value);
    }
}

}  // namespace fracmoc::expr
