#include <cmath>
#include <type_traits>

#include "fracmoc/expr.hpp"
#include "fracmoc/gamma.hpp"

namespace fracmoc::expr {

namespace {

double checked(double r, const char* what, const Expr& e) {
    if (!std::isfinite(r)) throw EvalError(what, print(e));
    return r;
}

double apply(Func fn, double a, const Expr& e) {
    switch (fn) {
        case Func::Sin: return std::sin(a);
        case Func::Cos: return std::cos(a);
        case Func::Exp: return checked(std::exp(a), "overflow", e);
        case Func::Ln:
            if (!(a > 0.0)) throw EvalError("logarithm of non-positive value", print(e));
            return std::log(a);
        case Func::Sqrt:
            if (a < 0.0) throw EvalError("square root of negative value", print(e));
            return std::sqrt(a);
        case Func::Gamma:
            if (is_gamma_pole(a)) throw EvalError("gamma function pole", print(e));
            return checked(std::tgamma(a), "gamma overflow", e);
    }
    return 0.0;
}

}  // namespace

double eval(const Expr& e, const Bindings& b) {
    return std::visit(
        [&](const auto& n) -> double {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return n.value;
            } else if constexpr (std::is_same_v<T, Variable>) {
                switch (n.var) {
                    case Var::X: return b.x;
                    case Var::T: return b.t;
                    case Var::Z: return b.z;
                }
                return 0.0;
            } else if constexpr (std::is_same_v<T, Negate>) {
                return -eval(n.arg, b);
            } else if constexpr (std::is_same_v<T, Binary>) {
                const double l = eval(n.lhs, b);
                const double r = eval(n.rhs, b);
                switch (n.op) {
                    case BinaryOp::Add: return checked(l + r, "overflow", e);
                    case BinaryOp::Sub: return checked(l - r, "overflow", e);
                    case BinaryOp::Mul: return checked(l * r, "overflow", e);
                    case BinaryOp::Div:
                        if (r == 0.0) throw EvalError("division by zero", print(e));
                        return checked(l / r, "overflow", e);
                    case BinaryOp::Pow:
                        if (l < 0.0 && std::floor(r) != r)
                            throw EvalError("negative base with non-integer exponent", print(e));
                        if (l == 0.0 && r < 0.0) throw EvalError("zero raised to a negative power", print(e));
                        return checked(std::pow(l, r), "overflow", e);
                }
                return 0.0;
            } else {
                return apply(n.fn, eval(n.arg, b), e);
            }
        },
        e.node().value);
}

}  // namespace fracmoc::expr
