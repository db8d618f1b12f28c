#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "pass/labeled_tensor.hpp"

namespace pass {

// One node of the wiring diagram: an equation on k consecutive chain
// variables starting at first_var. owner -1 means the cell contributes no
// tuple coordinate (its feasible solution-set entries are {()}).
struct CellSpec {
    VarId first_var = 0;
    int arity = 3;
    VarId owner = -1000; // variable id owned by this cell; kOwnsNothing if none
    static constexpr VarId kOwnsNothing = -1000;
};

// The chain wiring diagram: visible cells 1..n with hidden boundary variables
// u_0 and u_{n+1} (the product is evaluated "as if 0 and n+1 were boundaries"),
// exposing u_1 and u_n as the pixel axes.
//
// 3-point stencils: equation cells at positions 1..n over (u_{i-1}, u_i, u_{i+1}),
// cell i owning u_i. With hidden_equations, two more cells at positions 0 and
// n+1 carry the same equation with their own outer hidden neighbors u_{-1} and
// u_{n+2} (owning nothing).
//
// 2-point stencils: cells 0..n over (u_i, u_{i+1}); cell i owns u_i for i >= 1,
// cell 0 owns nothing, and u_{n+1} is marginalized unowned. hidden_equations is
// a no-op (both hidden variables already carry equations).
struct ChainPlan {
    int n_visible = 0;
    int arity = 3;
    bool hidden_equations = false;
    std::vector<CellSpec> cells;  // left-to-right
    std::vector<VarId> variables; // ascending
    VarId exposed_left = 1;
    VarId exposed_right = 1;
};

inline ChainPlan make_chain_plan(int n_visible, int arity, bool hidden_equations = false) {
    if (n_visible < 2)
        throw std::invalid_argument("chain needs at least 2 visible cells");
    if (arity != 2 && arity != 3)
        throw std::invalid_argument("chain stencil arity must be 2 or 3");
    ChainPlan p;
    p.n_visible = n_visible;
    p.arity = arity;
    p.hidden_equations = hidden_equations && arity == 3;
    p.exposed_left = 1;
    p.exposed_right = n_visible;

    VarId vlo = 0, vhi = n_visible + 1;
    if (arity == 3) {
        const int clo = p.hidden_equations ? 0 : 1;
        const int chi = p.hidden_equations ? n_visible + 1 : n_visible;
        if (p.hidden_equations) {
            vlo = -1;
            vhi = n_visible + 2;
        }
        for (int i = clo; i <= chi; ++i) {
            CellSpec c;
            c.first_var = i - 1;
            c.arity = 3;
            c.owner = (i >= 1 && i <= n_visible) ? i : CellSpec::kOwnsNothing;
            p.cells.push_back(c);
        }
    } else {
        for (int i = 0; i <= n_visible; ++i) {
            CellSpec c;
            c.first_var = i;
            c.arity = 2;
            c.owner = i >= 1 ? i : CellSpec::kOwnsNothing;
            p.cells.push_back(c);
        }
    }
    for (VarId v = vlo; v <= vhi; ++v) p.variables.push_back(v);
    return p;
}

struct SweepStats {
    std::size_t peak_frontier_labels = 0;
};

// Contract the chain: absorb cell tensors one by one with multiply_aligned and
// marginalize every non-exposed variable as soon as no unabsorbed cell
// references it. The result is the 2-axis tensor over (u_1, u_n); tuple
// coordinates come out in ascending cell order u_1..u_n for either direction.
template <class SR>
LabeledTensor<SR> sweep_contract(const std::vector<const LabeledTensor<SR>*>& cells,
                                 const ChainPlan& plan, bool right_to_left = false,
                                 SweepStats* stats = nullptr) {
    if (cells.size() != plan.cells.size())
        throw std::invalid_argument("sweep_contract: cell tensor count does not match plan");

    // Absorption order.
    std::vector<std::size_t> order(cells.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = right_to_left ? order.size() - 1 - i : i;

    // After which absorption step each variable becomes free (last reference).
    auto touches = [&](std::size_t ci, VarId v) {
        const CellSpec& c = plan.cells[ci];
        return v >= c.first_var && v < c.first_var + c.arity;
    };

    LabeledTensor<SR> frontier = scalar_one<SR>();
    for (std::size_t step = 0; step < order.size(); ++step) {
        frontier = multiply_aligned(frontier, *cells[order[step]]);
        if (stats)
            stats->peak_frontier_labels =
                std::max(stats->peak_frontier_labels, frontier.labels.size());
        // Marginalize every frontier variable with no remaining references.
        std::vector<VarId> to_drop;
        for (VarId v : frontier.labels) {
            if (v == plan.exposed_left || v == plan.exposed_right) continue;
            bool referenced = false;
            for (std::size_t later = step + 1; later < order.size() && !referenced; ++later)
                referenced = touches(order[later], v);
            if (!referenced) to_drop.push_back(v);
        }
        for (VarId v : to_drop) frontier = marginalize(frontier, v);
    }

    if (frontier.labels != std::vector<VarId>{plan.exposed_left, plan.exposed_right})
        throw std::logic_error("sweep_contract: unexpected result labels");

    // Right-to-left absorption emits tuple coordinates in descending cell
    // order; restore the canonical ascending order.
    if (right_to_left) {
        if constexpr (std::is_same_v<SR, SolutionSetSemiring>) {
            for (auto& [off, val] : frontier.entries) val = ss_reverse_coords(val);
        }
    }
    return frontier;
}

} // namespace pass
