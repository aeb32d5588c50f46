#include <cctype>
#include <charconv>
#include <numbers>

#include "fracmoc/expr.hpp"

namespace fracmoc::expr {

std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    const auto digit = [&](std::size_t k) { return k < src.size() && std::isdigit(static_cast<unsigned char>(src[k])); };
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (digit(i) || (c == '.' && digit(i + 1))) {
            while (digit(i)) ++i;
            if (i < src.size() && src[i] == '.') {
                ++i;
                while (digit(i)) ++i;
            }
            if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
                std::size_t k = i + 1;
                if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
                if (digit(k)) {
                    i = k;
                    while (digit(i)) ++i;
                }
            }
            out.push_back({Token::Kind::Number, std::string(src.substr(start, i - start)), start});
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) ++i;
            out.push_back({Token::Kind::Identifier, std::string(src.substr(start, i - start)), start});
        } else if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
            out.push_back({Token::Kind::Operator, std::string(1, c), start});
            ++i;
        } else if (c == '(' || c == ')') {
            out.push_back({Token::Kind::Paren, std::string(1, c), start});
            ++i;
        } else if (c == ',') {
            out.push_back({Token::Kind::Comma, ",", start});
            ++i;
        } else {
            std::string shown = std::isprint(static_cast<unsigned char>(c))
                                    ? std::string(1, c)
                                    : "\\x" + std::to_string(static_cast<unsigned char>(c));
            throw ParseError(start, "unexpected character '" + shown + "'", "");
        }
    }
    return out;
}

namespace {

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src), tokens_(tokenize(src)) {}

    Expr parse_all() {
        if (tokens_.empty()) throw ParseError(src_.size(), "empty expression", "operand");
        Expr e = parse_expr();
        if (pos_ < tokens_.size())
            throw ParseError(peek().position, "unexpected '" + peek().lexeme + "'", "operator or end of input");
        return e;
    }

private:
    bool at_end() const { return pos_ >= tokens_.size(); }
    const Token& peek() const { return tokens_[pos_]; }
    std::size_t here() const { return at_end() ? src_.size() : peek().position; }

    bool accept(Token::Kind kind, std::string_view lexeme) {
        if (!at_end() && peek().kind == kind && peek().lexeme == lexeme) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect_close() {
        if (!accept(Token::Kind::Paren, ")")) {
            if (at_end()) throw ParseError(here(), "unexpected end of input", "')'");
            throw ParseError(here(), "unexpected '" + peek().lexeme + "'", "')'");
        }
    }

    Expr parse_expr() {
        Expr lhs = parse_term();
        for (;;) {
            if (accept(Token::Kind::Operator, "+"))
                lhs = binary(BinaryOp::Add, lhs, parse_term());
            else if (accept(Token::Kind::Operator, "-"))
                lhs = binary(BinaryOp::Sub, lhs, parse_term());
            else
                return lhs;
        }
    }

    Expr parse_term() {
        Expr lhs = parse_unary();
        for (;;) {
            if (accept(Token::Kind::Operator, "*"))
                lhs = binary(BinaryOp::Mul, lhs, parse_unary());
            else if (accept(Token::Kind::Operator, "/"))
                lhs = binary(BinaryOp::Div, lhs, parse_unary());
            else
                return lhs;
        }
    }

    Expr parse_unary() {
        if (accept(Token::Kind::Operator, "-")) return negate(parse_unary());
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_primary();
        if (accept(Token::Kind::Operator, "^")) return binary(BinaryOp::Pow, base, parse_unary());
        return base;
    }

    Expr parse_primary() {
        if (at_end()) throw ParseError(here(), "unexpected end of input", "operand");
        const Token tok = peek();
        switch (tok.kind) {
            case Token::Kind::Number: {
                ++pos_;
                double v = 0.0;
                const auto* first = tok.lexeme.data();
                const auto* last = first + tok.lexeme.size();
                auto [ptr, ec] = std::from_chars(first, last, v);
                if (ec != std::errc() || ptr != last)
                    throw ParseError(tok.position, "malformed number '" + tok.lexeme + "'", "number");
                return constant(v);
            }
            case Token::Kind::Identifier: {
                ++pos_;
                if (auto fn = function_named(tok.lexeme)) {
                    if (!accept(Token::Kind::Paren, "("))
                        throw ParseError(here(), "function '" + tok.lexeme + "' needs an argument", "'('");
                    Expr arg = parse_expr();
                    expect_close();
                    return call(*fn, arg);
                }
                Expr leaf;
                if (tok.lexeme == "x") leaf = variable(Var::X);
                else if (tok.lexeme == "t") leaf = variable(Var::T);
                else if (tok.lexeme == "z") leaf = variable(Var::Z);
                else if (tok.lexeme == "pi") leaf = constant(std::numbers::pi);
                else if (tok.lexeme == "e") leaf = constant(std::numbers::e);
                else
                    throw ParseError(tok.position, "unknown identifier '" + tok.lexeme + "'",
                                     "x, t, z, pi, e or a function name");
                if (!at_end() && peek().kind == Token::Kind::Paren && peek().lexeme == "(")
                    throw ParseError(here(), "'" + tok.lexeme + "' is not a function", "operator");
                return leaf;
            }
            case Token::Kind::Paren:
                if (tok.lexeme == "(") {
                    ++pos_;
                    Expr inner = parse_expr();
                    expect_close();
                    return inner;
                }
                [[fallthrough]];
            default:
                throw ParseError(tok.position, "unexpected '" + tok.lexeme + "'", "operand");
        }
    }

    static std::optional<Func> function_named(std::string_view s) {
        if (s == "sin") return Func::Sin;
        if (s == "cos") return Func::Cos;
        if (s == "exp") return Func::Exp;
        if (s == "ln") return Func::Ln;
        if (s == "sqrt") return Func::Sqrt;
        if (s == "gamma") return Func::Gamma;
        return std::nullopt;
    }

    std::string_view src_;
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view src) { return Parser(src).parse_all(); }

}  // namespace fracmoc::expr
