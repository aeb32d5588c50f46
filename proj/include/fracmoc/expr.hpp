#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fracmoc/errors.hpp"
#include "fracmoc/frcalc.hpp"
#include "fracmoc/order.hpp"

namespace fracmoc::expr {

enum class Var { X, T, Z };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class Func { Sin, Cos, Exp, Ln, Sqrt, Gamma };

std::string_view name(Var v);
std::string_view name(Func f);

struct Node;

// Immutable, shareable expression tree.
class Expr {
public:
    Expr() = default;
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    const Node& node() const { return *node_; }
    explicit operator bool() const { return node_ != nullptr; }

private:
    std::shared_ptr<const Node> node_;
};

struct Constant {
    double value;
};
struct Variable {
    Var var;
};
struct Negate {
    Expr arg;
};
struct Binary {
    BinaryOp op;
    Expr lhs;
    Expr rhs;
};
struct Call {
    Func fn;
    Expr arg;
};

struct Node {
    std::variant<Constant, Variable, Negate, Binary, Call> value;
};

// Raw constructors; no simplification.
Expr constant(double v);
Expr variable(Var v);
Expr negate(Expr a);
Expr binary(BinaryOp op, Expr lhs, Expr rhs);
Expr call(Func fn, Expr arg);

// Constructors that fold constants and drop identities (0 + e, 1 * e, e^1, ...).
// Function calls are never folded so gamma(...) coefficients stay readable.
Expr add(Expr a, Expr b);
Expr sub(Expr a, Expr b);
Expr mul(Expr a, Expr b);
Expr div(Expr a, Expr b);
Expr pow(Expr a, Expr b);
Expr neg(Expr a);

const Constant* as_constant(const Expr& e);
bool depends_on(const Expr& e, Var v);

struct Token {
    enum class Kind { Number, Identifier, Operator, Paren, Comma };
    Kind kind;
    std::string lexeme;
    std::size_t position;
};

std::vector<Token> tokenize(std::string_view src);

// Grammar (whitespace insignificant):
//   expr    := term { ('+' | '-') term }
//   term    := unary { ('*' | '/') unary }
//   unary   := '-' unary | power
//   power   := primary [ '^' unary ]          (right associative)
//   primary := number | 'x' | 't' | 'z' | 'pi' | 'e'
//            | func '(' expr ')' | '(' expr ')'
//   func    := 'sin' | 'cos' | 'exp' | 'ln' | 'sqrt' | 'gamma'
//   number  := digits [ '.' digits ] [ ('e'|'E') ['+'|'-'] digits ]
Expr parse(std::string_view src);

// Text that parses back to an equal-valued expression.
std::string print(const Expr& e);

struct Bindings {
    double x = 0.0;
    double t = 0.0;
    double z = 0.0;
};

// Throws EvalError on division by zero, log/sqrt domain errors, gamma poles
// and any other non-finite result.
double eval(const Expr& e, const Bindings& b);
inline double eval(const Expr& e, double x, double t = 0.0, double z = 0.0) { return eval(e, Bindings{x, t, z}); }

Expr diff_classical(const Expr& e, Var v);

// Formal Jumarie derivative over the supported pattern grammar: terms constant
// in v, v^b with b free of v, products/quotients with a single v-dependent
// factor, and compositions F(g) with F elementary (chain rule). Anything else
// throws PatternError naming the offending subtree.
Expr jumarie_derivative(const Expr& e, Var v, Order alpha);

// e as a function of `v` with the remaining variables fixed; carries the
// symbolic derivative.
ScalarFn bind(const Expr& e, Var v, Bindings fixed = {});

}  // namespace fracmoc::expr
