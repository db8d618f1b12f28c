#pragma once

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "pass/interval.hpp"

namespace pass {

// Arithmetic expressions over the chain variables um1, u0, up1 — the config
// contract for custom stencils and the symbolic form behind gradient bounds.
//
// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' integer)?
//   base   := number | um1 | u0 | up1 | '(' expr ')' | func '(' expr ')'
//   func   := sin | cos | exp

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { num, var, add, sub, mul, div, pow, sin, cos, exp };
    Kind kind;
    double value = 0.0; // num
    int var = 0;        // var: 0 = um1, 1 = u0, 2 = up1
    int exponent = 0;   // pow
    ExprPtr a, b;
};

struct parse_error : std::runtime_error {
    std::size_t position;
    parse_error(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
};

inline ExprPtr ex_num(double v) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::num;
    e->value = v;
    return e;
}

inline ExprPtr ex_var(int v) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::var;
    e->var = v;
    return e;
}

inline ExprPtr ex_node(Expr::Kind k, ExprPtr a, ExprPtr b = nullptr) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->a = std::move(a);
    e->b = std::move(b);
    return e;
}

inline ExprPtr ex_pow(ExprPtr a, int p) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::pow;
    e->exponent = p;
    e->a = std::move(a);
    return e;
}

inline bool ex_is_num(const ExprPtr& e, double v) {
    return e->kind == Expr::Kind::num && e->value == v;
}

// Simplifying constructors keep derivative trees small so interval bounds stay tight.
inline ExprPtr ex_add(ExprPtr a, ExprPtr b) {
    if (ex_is_num(a, 0.0)) return b;
    if (ex_is_num(b, 0.0)) return a;
    if (a->kind == Expr::Kind::num && b->kind == Expr::Kind::num) return ex_num(a->value + b->value);
    return ex_node(Expr::Kind::add, std::move(a), std::move(b));
}

inline ExprPtr ex_sub(ExprPtr a, ExprPtr b) {
    if (ex_is_num(b, 0.0)) return a;
    if (a->kind == Expr::Kind::num && b->kind == Expr::Kind::num) return ex_num(a->value - b->value);
    return ex_node(Expr::Kind::sub, std::move(a), std::move(b));
}

inline ExprPtr ex_mul(ExprPtr a, ExprPtr b) {
    if (ex_is_num(a, 0.0) || ex_is_num(b, 0.0)) return ex_num(0.0);
    if (ex_is_num(a, 1.0)) return b;
    if (ex_is_num(b, 1.0)) return a;
    if (a->kind == Expr::Kind::num && b->kind == Expr::Kind::num) return ex_num(a->value * b->value);
    return ex_node(Expr::Kind::mul, std::move(a), std::move(b));
}

inline ExprPtr ex_div(ExprPtr a, ExprPtr b) {
    if (ex_is_num(a, 0.0)) return ex_num(0.0);
    if (ex_is_num(b, 1.0)) return a;
    if (a->kind == Expr::Kind::num && b->kind == Expr::Kind::num && b->value != 0.0)
        return ex_num(a->value / b->value);
    return ex_node(Expr::Kind::div, std::move(a), std::move(b));
}

namespace detail {

struct Token {
    enum class Kind { num, ident, punct, end } kind;
    double value = 0.0;
    std::string text;
    char punct = 0;
    std::size_t pos = 0;
};

inline std::vector<Token> tokenize(const std::string& src) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* start = src.c_str() + i;
            char* end = nullptr;
            const double v = std::strtod(start, &end);
            if (end == start) throw parse_error("malformed number", i);
            Token t;
            t.kind = Token::Kind::num;
            t.value = v;
            t.pos = i;
            i += static_cast<std::size_t>(end - start);
            out.push_back(t);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                ++j;
            Token t;
            t.kind = Token::Kind::ident;
            t.text = src.substr(i, j - i);
            t.pos = i;
            i = j;
            out.push_back(t);
            continue;
        }
        if (std::string("+-*/^()").find(c) != std::string::npos) {
            Token t;
            t.kind = Token::Kind::punct;
            t.punct = c;
            t.pos = i;
            ++i;
            out.push_back(t);
            continue;
        }
        throw parse_error(std::string("unexpected character '") + c + "'", i);
    }
    Token end;
    end.kind = Token::Kind::end;
    end.pos = src.size();
    out.push_back(end);
    return out;
}

class Parser {
  public:
    explicit Parser(const std::string& src) : toks_(tokenize(src)) {}

    ExprPtr parse() {
        ExprPtr e = expr();
        if (cur().kind != Token::Kind::end)
            throw parse_error("unexpected trailing input", cur().pos);
        return e;
    }

  private:
    const Token& cur() const { return toks_[pos_]; }
    void advance() { ++pos_; }

    bool eat_punct(char c) {
        if (cur().kind == Token::Kind::punct && cur().punct == c) {
            advance();
            return true;
        }
        return false;
    }

    ExprPtr expr() {
        ExprPtr e = term();
        for (;;) {
            if (eat_punct('+'))
                e = ex_node(Expr::Kind::add, e, term());
            else if (eat_punct('-'))
                e = ex_node(Expr::Kind::sub, e, term());
            else
                return e;
        }
    }

    ExprPtr term() {
        ExprPtr e = factor();
        for (;;) {
            if (eat_punct('*'))
                e = ex_node(Expr::Kind::mul, e, factor());
            else if (eat_punct('/'))
                e = ex_node(Expr::Kind::div, e, factor());
            else
                return e;
        }
    }

    ExprPtr factor() {
        ExprPtr e = base();
        if (eat_punct('^')) return ex_pow(e, integer());
        return e;
    }

    int integer() {
        bool neg = false;
        if (eat_punct('-')) neg = true;
        if (cur().kind != Token::Kind::num)
            throw parse_error("expected integer exponent", cur().pos);
        const double v = cur().value;
        if (v != std::floor(v) || std::fabs(v) > 1e9)
            throw parse_error("exponent must be an integer", cur().pos);
        advance();
        const int p = static_cast<int>(v);
        return neg ? -p : p;
    }

    ExprPtr base() {
        if (cur().kind == Token::Kind::num) {
            const double v = cur().value;
            advance();
            return ex_num(v);
        }
        if (cur().kind == Token::Kind::ident) {
            const std::string name = cur().text;
            const std::size_t pos = cur().pos;
            advance();
            if (name == "um1") return ex_var(0);
            if (name == "u0") return ex_var(1);
            if (name == "up1") return ex_var(2);
            if (name == "sin" || name == "cos" || name == "exp") {
                if (!eat_punct('('))
                    throw parse_error("expected '(' after function name", cur().pos);
                ExprPtr arg = expr();
                if (!eat_punct(')')) throw parse_error("expected ')'", cur().pos);
                const Expr::Kind k = name == "sin"   ? Expr::Kind::sin
                                     : name == "cos" ? Expr::Kind::cos
                                                     : Expr::Kind::exp;
                return ex_node(k, arg);
            }
            throw parse_error("unknown identifier '" + name + "'", pos);
        }
        if (eat_punct('(')) {
            ExprPtr e = expr();
            if (!eat_punct(')')) throw parse_error("expected ')'", cur().pos);
            return e;
        }
        throw parse_error("expected number, variable, function, or '('", cur().pos);
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

inline double ipow(double x, int p) {
    if (p < 0) return 1.0 / ipow(x, -p);
    double r = 1.0;
    while (p > 0) {
        if (p & 1) r *= x;
        x *= x;
        p >>= 1;
    }
    return r;
}

} // namespace detail

inline ExprPtr parse_expression(const std::string& source) {
    return detail::Parser(source).parse();
}

// env holds the values of (um1, u0, up1); unused slots may be anything.
inline double ex_eval(const ExprPtr& e, const double env[3]) {
    switch (e->kind) {
        case Expr::Kind::num: return e->value;
        case Expr::Kind::var: return env[e->var];
        case Expr::Kind::add: return ex_eval(e->a, env) + ex_eval(e->b, env);
        case Expr::Kind::sub: return ex_eval(e->a, env) - ex_eval(e->b, env);
        case Expr::Kind::mul: return ex_eval(e->a, env) * ex_eval(e->b, env);
        case Expr::Kind::div: return ex_eval(e->a, env) / ex_eval(e->b, env);
        case Expr::Kind::pow: return detail::ipow(ex_eval(e->a, env), e->exponent);
        case Expr::Kind::sin: return std::sin(ex_eval(e->a, env));
        case Expr::Kind::cos: return std::cos(ex_eval(e->a, env));
        case Expr::Kind::exp: return std::exp(ex_eval(e->a, env));
    }
    return 0.0;
}

inline Interval ex_eval_interval(const ExprPtr& e, const Interval env[3]) {
    switch (e->kind) {
        case Expr::Kind::num: return Interval::point(e->value);
        case Expr::Kind::var: return env[e->var];
        case Expr::Kind::add: return iv_add(ex_eval_interval(e->a, env), ex_eval_interval(e->b, env));
        case Expr::Kind::sub: return iv_sub(ex_eval_interval(e->a, env), ex_eval_interval(e->b, env));
        case Expr::Kind::mul: return iv_mul(ex_eval_interval(e->a, env), ex_eval_interval(e->b, env));
        case Expr::Kind::div: return iv_div(ex_eval_interval(e->a, env), ex_eval_interval(e->b, env));
        case Expr::Kind::pow: return iv_pow(ex_eval_interval(e->a, env), e->exponent);
        case Expr::Kind::sin: return iv_sin(ex_eval_interval(e->a, env));
        case Expr::Kind::cos: return iv_cos(ex_eval_interval(e->a, env));
        case Expr::Kind::exp: return iv_exp(ex_eval_interval(e->a, env));
    }
    return Interval::whole();
}

// Symbolic partial derivative with respect to variable index v.
inline ExprPtr ex_derivative(const ExprPtr& e, int v) {
    switch (e->kind) {
        case Expr::Kind::num: return ex_num(0.0);
        case Expr::Kind::var: return ex_num(e->var == v ? 1.0 : 0.0);
        case Expr::Kind::add: return ex_add(ex_derivative(e->a, v), ex_derivative(e->b, v));
        case Expr::Kind::sub: return ex_sub(ex_derivative(e->a, v), ex_derivative(e->b, v));
        case Expr::Kind::mul:
            return ex_add(ex_mul(ex_derivative(e->a, v), e->b),
                          ex_mul(e->a, ex_derivative(e->b, v)));
        case Expr::Kind::div: {
            ExprPtr da = ex_derivative(e->a, v);
            ExprPtr db = ex_derivative(e->b, v);
            if (ex_is_num(db, 0.0)) return ex_div(std::move(da), e->b);
            return ex_div(ex_sub(ex_mul(std::move(da), e->b), ex_mul(e->a, std::move(db))),
                          ex_pow(e->b, 2));
        }
        case Expr::Kind::pow: {
            if (e->exponent == 0) return ex_num(0.0);
            ExprPtr inner = ex_mul(ex_num(static_cast<double>(e->exponent)),
                                   ex_pow(e->a, e->exponent - 1));
            return ex_mul(std::move(inner), ex_derivative(e->a, v));
        }
        case Expr::Kind::sin:
            return ex_mul(ex_node(Expr::Kind::cos, e->a), ex_derivative(e->a, v));
        case Expr::Kind::cos:
            return ex_mul(ex_mul(ex_num(-1.0), ex_node(Expr::Kind::sin, e->a)),
                          ex_derivative(e->a, v));
        case Expr::Kind::exp:
            return ex_mul(ex_node(Expr::Kind::exp, e->a), ex_derivative(e->a, v));
    }
    return ex_num(0.0);
}

inline void ex_vars_used(const ExprPtr& e, bool used[3]) {
    if (!e) return;
    if (e->kind == Expr::Kind::var) used[e->var] = true;
    ex_vars_used(e->a, used);
    ex_vars_used(e->b, used);
}

} // namespace pass
