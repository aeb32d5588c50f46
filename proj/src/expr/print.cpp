#include <charconv>
#include <cmath>
#include <type_traits>

#include "fracmoc/expr.hpp"

namespace fracmoc::expr {

namespace {

enum Prec { kSum = 1, kProduct = 2, kUnary = 3, kPower = 4, kAtom = 5 };

std::string number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, ptr);
    if (v < 0.0 || (v == 0.0 && std::signbit(v))) return "(" + s + ")";
    return s;
}

int precedence(const Expr& e) {
    return std::visit(
        [](const auto& n) -> int {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Negate>) {
                return kUnary;
            } else if constexpr (std::is_same_v<T, Binary>) {
                switch (n.op) {
                    case BinaryOp::Add:
                    case BinaryOp::Sub: return kSum;
                    case BinaryOp::Mul:
                    case BinaryOp::Div: return kProduct;
                    case BinaryOp::Pow: return kPower;
                }
                return kAtom;
            } else {
                return kAtom;
            }
        },
        e.node().value);
}

void emit(const Expr& e, int min_prec, std::string& out);

void emit_binary(const Binary& b, std::string& out) {
    switch (b.op) {
        case BinaryOp::Add:
            emit(b.lhs, kSum, out);
            out += " + ";
            emit(b.rhs, kProduct, out);
            break;
        case BinaryOp::Sub:
            emit(b.lhs, kSum, out);
            out += " - ";
            emit(b.rhs, kProduct, out);
            break;
        case BinaryOp::Mul:
            emit(b.lhs, kProduct, out);
            out += " * ";
            emit(b.rhs, kUnary, out);
            break;
        case BinaryOp::Div:
            emit(b.lhs, kProduct, out);
            out += "/";
            emit(b.rhs, kUnary, out);
            break;
        case BinaryOp::Pow:
            emit(b.lhs, kAtom, out);
            out += "^";
            emit(b.rhs, kUnary, out);
            break;
    }
}

void emit(const Expr& e, int min_prec, std::string& out) {
    const bool parens = precedence(e) < min_prec;
    if (parens) out += "(";
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Constant>) {
                out += number(n.value);
            } else if constexpr (std::is_same_v<T, Variable>) {
                out += name(n.var);
            } else if constexpr (std::is_same_v<T, Negate>) {
                out += "-";
                emit(n.arg, kUnary, out);
            } else if constexpr (std::is_same_v<T, Binary>) {
                emit_binary(n, out);
            } else {
                out += name(n.fn);
                out += "(";
                emit(n.arg, kSum, out);
                out += ")";
            }
        },
        e.node().value);
    if (parens) out += ")";
}

}  // namespace

std::string print(const Expr& e) {
    std::string out;
    emit(e, kSum, out);
    return out;
}

}  // namespace fracmoc::expr
