#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "pass/expr.hpp"
#include "pass/grid.hpp"

namespace pass {

// Named parameters of the builtin equations.
struct StencilParams {
    std::optional<double> mu; // intrinsic growth rate
    std::optional<double> h;  // length of a discrete spatial interval
    std::optional<double> D;  // diffusion coefficient
    std::optional<double> f;  // constant forcing term f^
    std::string reaction;     // R(u) expression for reaction_diffusion, in u0
};

// A discrete steady-state condition: an arity-k residual over consecutive
// chain variables. For k=3 the argument order is (u_{i-1}, u_i, u_{i+1}) and
// the cell owns the middle variable; for k=2 it is (u_i, u_{i+1}) and the
// cell owns the first.
struct Stencil {
    int arity = 3;
    int owner_offset = 1;
    std::string name;
    std::function<double(const double*)> residual;
    ExprPtr ast;                      // symbolic form (gradient bounds)
    std::array<ExprPtr, 3> partials;  // d/d(um1), d/d(u0), d/d(up1)
};

namespace detail {

inline void finish_stencil(Stencil& s) {
    for (int v = 0; v < 3; ++v) s.partials[v] = ex_derivative(s.ast, v);
    if (!s.residual) {
        const ExprPtr ast = s.ast;
        const int arity = s.arity;
        s.residual = [ast, arity](const double* xs) {
            double env[3];
            if (arity == 3) {
                env[0] = xs[0];
                env[1] = xs[1];
                env[2] = xs[2];
            } else {
                env[0] = 0.0;
                env[1] = xs[0];
                env[2] = xs[1];
            }
            return ex_eval(ast, env);
        };
    }
}

} // namespace detail

// The paper's four equations plus the generic reaction-diffusion form.
// Residuals (a = u_{i-1}, m = u_i, c = u_{i+1}):
//   heat                c - 2m + a                      (h^2 cleared)
//   fisher              (c - 2m + a)/h^2 + mu*m*(1-m)
//   bbm                 ((c - m)/h) * (1 + m)
//   sine_gordon         sin(m) - (c - 2m + a)/h^2
//   reaction_diffusion  (D/h^2)*(c - 2m + a) + R(m) + f
inline Stencil builtin_stencil(const std::string& name, const StencilParams& params = {}) {
    auto need_h = [&]() {
        if (!params.h || *params.h <= 0.0)
            throw std::invalid_argument("stencil '" + name + "' requires positive parameter h");
        return *params.h;
    };

    Stencil s;
    s.name = name;
    const ExprPtr a = ex_var(0), m = ex_var(1), c = ex_var(2);
    const ExprPtr diff2 = ex_node(Expr::Kind::add,
                                  ex_node(Expr::Kind::sub, c, ex_node(Expr::Kind::mul, ex_num(2.0), m)),
                                  a);

    if (name == "heat") {
        s.arity = 3;
        s.owner_offset = 1;
        s.residual = [](const double* x) { return x[2] - 2.0 * x[1] + x[0]; };
        s.ast = diff2;
    } else if (name == "fisher") {
        if (!params.mu)
            throw std::invalid_argument("stencil 'fisher' requires parameter mu");
        const double h = need_h();
        const double mu = *params.mu;
        s.arity = 3;
        s.owner_offset = 1;
        s.residual = [h, mu](const double* x) {
            return (x[2] - 2.0 * x[1] + x[0]) / (h * h) + mu * x[1] * (1.0 - x[1]);
        };
        s.ast = ex_node(Expr::Kind::add,
                        ex_node(Expr::Kind::div, diff2, ex_num(h * h)),
                        ex_node(Expr::Kind::mul, ex_node(Expr::Kind::mul, ex_num(mu), m),
                                ex_node(Expr::Kind::sub, ex_num(1.0), m)));
    } else if (name == "bbm") {
        const double h = need_h();
        s.arity = 2;
        s.owner_offset = 0;
        s.residual = [h](const double* x) { return ((x[1] - x[0]) / h) * (1.0 + x[0]); };
        s.ast = ex_node(Expr::Kind::mul,
                        ex_node(Expr::Kind::div, ex_node(Expr::Kind::sub, c, m), ex_num(h)),
                        ex_node(Expr::Kind::add, ex_num(1.0), m));
    } else if (name == "sine_gordon") {
        const double h = need_h();
        s.arity = 3;
        s.owner_offset = 1;
        s.residual = [h](const double* x) {
            return std::sin(x[1]) - (x[2] - 2.0 * x[1] + x[0]) / (h * h);
        };
        s.ast = ex_node(Expr::Kind::sub, ex_node(Expr::Kind::sin, m),
                        ex_node(Expr::Kind::div, diff2, ex_num(h * h)));
    } else if (name == "reaction_diffusion") {
        const double h = need_h();
        if (!params.D)
            throw std::invalid_argument("stencil 'reaction_diffusion' requires parameter D");
        if (!params.f)
            throw std::invalid_argument("stencil 'reaction_diffusion' requires parameter f");
        if (params.reaction.empty())
            throw std::invalid_argument("stencil 'reaction_diffusion' requires a reaction expression");
        const ExprPtr R = parse_expression(params.reaction);
        bool used[3] = {false, false, false};
        ex_vars_used(R, used);
        if (used[0] || used[2])
            throw std::invalid_argument("reaction expression may reference u0 only");
        const double D = *params.D, f = *params.f, h2 = h * h;
        const ExprPtr Rc = R;
        s.arity = 3;
        s.owner_offset = 1;
        s.residual = [D, h2, f, Rc](const double* x) {
            double env[3] = {x[0], x[1], x[2]};
            return (D / h2) * (x[2] - 2.0 * x[1] + x[0]) + ex_eval(Rc, env) + f;
        };
        s.ast = ex_node(Expr::Kind::add,
                        ex_node(Expr::Kind::add,
                                ex_node(Expr::Kind::mul, ex_num(D / h2), diff2), R),
                        ex_num(f));
    } else {
        throw std::invalid_argument("unknown builtin stencil '" + name + "'");
    }
    detail::finish_stencil(s);
    return s;
}

// Custom stencil from expression source. arity 2 stencils must not reference um1.
inline Stencil parse_stencil(const std::string& source, int arity) {
    if (arity != 2 && arity != 3)
        throw std::invalid_argument("stencil arity must be 2 or 3");
    Stencil s;
    s.name = "custom";
    s.arity = arity;
    s.owner_offset = arity == 3 ? 1 : 0;
    s.ast = parse_expression(source);
    if (arity == 2) {
        bool used[3] = {false, false, false};
        ex_vars_used(s.ast, used);
        if (used[0])
            throw std::invalid_argument("um1 cannot appear in an arity-2 stencil");
    }
    detail::finish_stencil(s);
    return s;
}

// Upper bound on sup over the subcube of ||grad f||_2, by interval arithmetic
// on the symbolic partial derivatives. Exact for constant gradients.
inline double gradient_bound(const Stencil& s, const Subcube& sub) {
    Interval env[3];
    if (s.arity == 3) {
        for (int i = 0; i < 3; ++i)
            env[i] = {sub.centers[i] - sub.half_width, sub.centers[i] + sub.half_width};
    } else {
        env[0] = Interval::point(0.0);
        env[1] = {sub.centers[0] - sub.half_width, sub.centers[0] + sub.half_width};
        env[2] = {sub.centers[1] - sub.half_width, sub.centers[1] + sub.half_width};
    }
    double sq = 0.0;
    const int first = s.arity == 3 ? 0 : 1;
    for (int v = first; v < 3; ++v) {
        const double m = iv_abs_max(ex_eval_interval(s.partials[v], env));
        sq += m * m;
    }
    return std::sqrt(sq);
}

} // namespace pass
