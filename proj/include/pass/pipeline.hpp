#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "pass/chain.hpp"
#include "pass/grid.hpp"
#include "pass/tensorize.hpp"

namespace pass {

enum class Mode { pa, pass, hybrid };

struct Problem {
    Stencil stencil;
    Binning binning;
    int n_visible = 0;
    FeasibilityParams feas;
    Mode mode = Mode::hybrid;
    std::size_t max_solutions_per_pixel = 10000;
    // Optional pixel filter: exact (left value, right value) pairs to report.
    std::optional<std::vector<std::pair<double, double>>> boundaries;
    bool hidden_equations = false;
    std::string equation_label;
};

struct PixelPayload {
    SolutionSet set;             // canonical, possibly truncated
    std::size_t full_count = 0;  // untruncated solution count
    bool truncated = false;
};

// 2-D array over (left boundary bin, right boundary bin). Row-major with the
// left index as the row, matching the graymap raster.
struct PixelResult {
    Binning binning;
    Mode mode = Mode::hybrid;
    int n_visible = 0;
    std::vector<std::uint8_t> nonempty;                  // count*count
    std::vector<PixelPayload> pixels;                    // count*count; empty in pa mode
    std::optional<std::vector<std::uint8_t>> in_filter;  // absent = all pixels in scope

    std::size_t index(std::size_t left, std::size_t right) const {
        return left * binning.count + right;
    }
    bool in_scope(std::size_t left, std::size_t right) const {
        return !in_filter || (*in_filter)[index(left, right)] != 0;
    }
};

// The modified L2 norm between a numerical tuple and the linear interpolant
// whose endpoints are the pixel's boundary values at cells 1 and n.
inline double modified_l2(const double* tuple, int n, double left, double right) {
    if (n < 2) throw std::invalid_argument("modified_l2 needs tuple length >= 2");
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = left + (right - left) * static_cast<double>(i) / (n - 1);
        const double d = tuple[i] - u;
        sum += d * d;
    }
    return std::sqrt(sum);
}

inline double modified_l2(const std::vector<double>& tuple, double left, double right) {
    return modified_l2(tuple.data(), static_cast<int>(tuple.size()), left, right);
}

// Eq 6: L = epsilon * ceil(n/2)^(5/2).
inline double l2_bound(double epsilon, int n) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("l2_bound needs epsilon > 0");
    const double half = std::ceil(static_cast<double>(n) / 2.0);
    return epsilon * std::pow(half, 2.5);
}

namespace detail {

struct PixelFilter {
    std::vector<std::size_t> left_indices;   // sorted unique
    std::vector<std::size_t> right_indices;  // sorted unique
    std::vector<std::uint8_t> mask;          // count*count, listed pairs only
};

inline std::optional<PixelFilter> make_filter(const Problem& p) {
    if (!p.boundaries) return std::nullopt;
    PixelFilter f;
    f.mask.assign(p.binning.count * p.binning.count, 0);
    for (const auto& [lv, rv] : *p.boundaries) {
        std::size_t li, ri;
        try {
            li = index_of(p.binning, lv);
            ri = index_of(p.binning, rv);
        } catch (const std::out_of_range&) {
            throw std::invalid_argument("boundary value outside the binned range");
        }
        if (std::fabs(center(p.binning, li) - lv) > 1e-9 ||
            std::fabs(center(p.binning, ri) - rv) > 1e-9)
            throw std::invalid_argument("boundary values must be exact bin centers");
        f.left_indices.push_back(li);
        f.right_indices.push_back(ri);
        f.mask[li * p.binning.count + ri] = 1;
    }
    auto dedupe = [](std::vector<std::size_t>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    dedupe(f.left_indices);
    dedupe(f.right_indices);
    return f;
}

// Keep only entries whose index along `label` is in `allowed` (sorted).
template <class SR>
LabeledTensor<SR> slice_axis(const LabeledTensor<SR>& t, VarId label,
                             const std::vector<std::size_t>& allowed) {
    auto it = std::lower_bound(t.labels.begin(), t.labels.end(), label);
    if (it == t.labels.end() || *it != label) return t;
    const std::size_t axis = static_cast<std::size_t>(it - t.labels.begin());
    LabeledTensor<SR> r;
    r.labels = t.labels;
    r.extents = t.extents;
    std::vector<std::size_t> idx(t.labels.size());
    for (const auto& [off, val] : t.entries) {
        unflatten(off, t.extents, idx.data());
        if (std::binary_search(allowed.begin(), allowed.end(), idx[axis]))
            r.entries.emplace(off, val);
    }
    return r;
}

template <class SR>
std::vector<LabeledTensor<SR>> build_all_cells(const Problem& p, const ChainPlan& plan,
                                               unsigned threads) {
    std::vector<LabeledTensor<SR>> cells;
    cells.reserve(plan.cells.size());
    for (const CellSpec& c : plan.cells)
        cells.push_back(build_cell_tensor<SR>(p.stencil, p.binning, c, p.feas, threads));
    return cells;
}

template <class SR>
LabeledTensor<SR> sweep_cells(const std::vector<LabeledTensor<SR>>& cells,
                              const ChainPlan& plan) {
    std::vector<const LabeledTensor<SR>*> ptrs;
    ptrs.reserve(cells.size());
    for (const auto& c : cells) ptrs.push_back(&c);
    return sweep_contract<SR>(ptrs, plan);
}

inline void package_payload(PixelResult& r, std::size_t li, std::size_t ri, SolutionSet set,
                            std::size_t max_solutions) {
    PixelPayload& pp = r.pixels[r.index(li, ri)];
    pp.full_count = set.count;
    pp.truncated = set.count > max_solutions;
    pp.set = pp.truncated ? ss_truncate(set, max_solutions) : std::move(set);
    r.nonempty[r.index(li, ri)] = pp.full_count > 0 ? 1 : 0;
}

} // namespace detail

inline PixelResult solve(const Problem& p, unsigned threads = 1) {
    if (p.n_visible < 2) throw std::invalid_argument("cells must be at least 2");
    if (p.max_solutions_per_pixel < 1)
        throw std::invalid_argument("max_solutions_per_pixel must be positive");
    const ChainPlan plan = make_chain_plan(p.n_visible, p.stencil.arity, p.hidden_equations);
    const auto filter = detail::make_filter(p);
    const std::size_t nb = p.binning.count;

    PixelResult r;
    r.binning = p.binning;
    r.mode = p.mode;
    r.n_visible = p.n_visible;
    r.nonempty.assign(nb * nb, 0);
    if (p.mode != Mode::pa) r.pixels.assign(nb * nb, {});
    if (filter) r.in_filter = filter->mask;

    auto apply_filter_slices = [&](auto& cells) {
        if (!filter) return;
        for (auto& t : cells) {
            t = detail::slice_axis(t, plan.exposed_left, filter->left_indices);
            t = detail::slice_axis(t, plan.exposed_right, filter->right_indices);
        }
    };

    if (p.mode == Mode::pa) {
        auto cells = detail::build_all_cells<BoolSemiring>(p, plan, threads);
        apply_filter_slices(cells);
        const auto final_t = detail::sweep_cells(cells, plan);
        for (const auto& [off, val] : final_t.entries) r.nonempty[off] = 1;
        if (filter)
            for (std::size_t i = 0; i < r.nonempty.size(); ++i)
                if (!filter->mask[i]) r.nonempty[i] = 0;
        return r;
    }

    if (p.mode == Mode::pass) {
        auto cells = detail::build_all_cells<SolutionSetSemiring>(p, plan, threads);
        apply_filter_slices(cells);
        auto final_t = detail::sweep_cells(cells, plan);
        for (auto& [off, val] : final_t.entries) {
            const std::size_t li = off / nb, ri = off % nb;
            if (filter && !filter->mask[off]) continue;
            detail::package_payload(r, li, ri, std::move(val), p.max_solutions_per_pixel);
        }
        return r;
    }

    // Hybrid: boolean prepass over everything, then per-pixel solution-set
    // recomputation restricted to the nonempty pixels.
    auto bool_cells = detail::build_all_cells<BoolSemiring>(p, plan, threads);
    apply_filter_slices(bool_cells);
    const auto bool_final = detail::sweep_cells(bool_cells, plan);

    std::vector<std::pair<std::size_t, std::size_t>> live;
    for (const auto& [off, val] : bool_final.entries) {
        if (filter && !filter->mask[off]) continue;
        live.emplace_back(off / nb, off % nb);
    }

    auto ss_cells = detail::build_all_cells<SolutionSetSemiring>(p, plan, threads);

    std::vector<SolutionSet> slots(live.size());
    auto solve_pixel = [&](std::size_t i) {
        const auto [li, ri] = live[i];
        const std::vector<std::size_t> lset{li}, rset{ri};
        std::vector<LabeledTensor<SolutionSetSemiring>> sliced;
        std::vector<const LabeledTensor<SolutionSetSemiring>*> ptrs;
        sliced.reserve(ss_cells.size());
        for (const auto& t : ss_cells) {
            auto s = detail::slice_axis(t, plan.exposed_left, lset);
            s = detail::slice_axis(s, plan.exposed_right, rset);
            sliced.push_back(std::move(s));
        }
        for (const auto& t : sliced) ptrs.push_back(&t);
        auto final_t = sweep_contract<SolutionSetSemiring>(ptrs, plan);
        auto it = final_t.entries.find(li * nb + ri);
        if (it != final_t.entries.end()) slots[i] = std::move(it->second);
    };

    if (threads <= 1 || live.size() < 2) {
        for (std::size_t i = 0; i < live.size(); ++i) solve_pixel(i);
    } else {
        const unsigned nt = std::min<unsigned>(threads, 64);
        std::vector<std::thread> workers;
        for (unsigned w = 0; w < nt; ++w)
            workers.emplace_back([&, w] {
                for (std::size_t i = w; i < live.size(); i += nt) solve_pixel(i);
            });
        for (auto& th : workers) th.join();
    }

    for (std::size_t i = 0; i < live.size(); ++i) {
        const auto [li, ri] = live[i];
        detail::package_payload(r, li, ri, std::move(slots[i]), p.max_solutions_per_pixel);
    }
    return r;
}

// Independent oracle: exhaustive enumeration over all assignments of the chain
// variables u_0..u_{n+1}; a visible tuple is recorded at pixel (u_1, u_n) iff
// every cell's feasibility test passes. (Subtrees are cut only when an
// already-fully-assigned cell fails, which cannot exclude any passing
// assignment.) Duplicates from distinct hidden values merge.
inline PixelResult brute_force_solve(const Problem& p) {
    if (p.n_visible < 2) throw std::invalid_argument("cells must be at least 2");
    const ChainPlan plan = make_chain_plan(p.n_visible, p.stencil.arity, p.hidden_equations);
    const auto filter = detail::make_filter(p);
    const std::size_t nb = p.binning.count;
    const std::size_t nvars = plan.variables.size();

    double budget = 1.0;
    for (std::size_t i = 0; i < nvars; ++i) budget *= static_cast<double>(nb);
    if (budget > 1e8) throw std::runtime_error("brute force instance too large (guard: bins^(n+2) <= 1e8)");

    PixelResult r;
    r.binning = p.binning;
    r.mode = p.mode;
    r.n_visible = p.n_visible;
    r.nonempty.assign(nb * nb, 0);
    if (p.mode != Mode::pa) r.pixels.assign(nb * nb, {});
    if (filter) r.in_filter = filter->mask;

    const VarId vlo = plan.variables.front();
    auto var_pos = [&](VarId v) { return static_cast<std::size_t>(v - vlo); };

    // cells_done_at[d]: cells fully assigned once variable d is set.
    std::vector<std::vector<std::size_t>> cells_done_at(nvars);
    for (std::size_t ci = 0; ci < plan.cells.size(); ++ci) {
        const CellSpec& c = plan.cells[ci];
        cells_done_at[var_pos(c.first_var + c.arity - 1)].push_back(ci);
    }

    std::vector<std::set<std::vector<double>>> found(nb * nb); // tuple set per pixel
    std::vector<std::size_t> assign(nvars, 0);

    std::function<void(std::size_t)> enumerate = [&](std::size_t d) {
        if (d == nvars) {
            const std::size_t li = assign[var_pos(plan.exposed_left)];
            const std::size_t ri = assign[var_pos(plan.exposed_right)];
            if (filter && !filter->mask[li * nb + ri]) return;
            std::vector<double> tuple;
            tuple.reserve(p.n_visible);
            for (VarId v = 1; v <= p.n_visible; ++v)
                tuple.push_back(center(p.binning, assign[var_pos(v)]));
            found[li * nb + ri].insert(std::move(tuple));
            return;
        }
        for (std::size_t j = 0; j < nb; ++j) {
            assign[d] = j;
            bool ok = true;
            for (std::size_t ci : cells_done_at[d]) {
                const CellSpec& c = plan.cells[ci];
                std::size_t idx[3];
                for (int i = 0; i < c.arity; ++i) idx[i] = assign[var_pos(c.first_var + i)];
                if (!feasible(p.stencil, p.binning, idx, p.feas)) {
                    ok = false;
                    break;
                }
            }
            if (ok) enumerate(d + 1);
        }
    };
    enumerate(0);

    for (std::size_t off = 0; off < found.size(); ++off) {
        if (found[off].empty()) continue;
        if (p.mode == Mode::pa) {
            r.nonempty[off] = 1;
            continue;
        }
        SolutionSet set;
        set.len = p.n_visible;
        set.count = found[off].size();
        for (const auto& tuple : found[off])
            set.flat.insert(set.flat.end(), tuple.begin(), tuple.end());
        detail::package_payload(r, off / nb, off % nb, std::move(set),
                                p.max_solutions_per_pixel);
    }
    return r;
}

// Compare two results of the same mode; returns a description of the first
// difference, or nothing if identical.
inline std::optional<std::string> diff_results(const PixelResult& a, const PixelResult& b) {
    const std::size_t nb = a.binning.count;
    if (b.binning.count != nb) return "bin counts differ";
    if (a.mode != b.mode) return "modes differ";
    for (std::size_t li = 0; li < nb; ++li)
        for (std::size_t ri = 0; ri < nb; ++ri) {
            const std::size_t off = li * nb + ri;
            const bool as = a.in_scope(li, ri), bs = b.in_scope(li, ri);
            auto loc = [&] {
                return "pixel (left bin " + std::to_string(li) + ", right bin " +
                       std::to_string(ri) + ")";
            };
            if (as != bs) return "pixel scope differs at " + loc();
            if (!as) continue;
            if (a.nonempty[off] != b.nonempty[off]) return "nonemptiness differs at " + loc();
            if (a.mode == Mode::pa) continue;
            const PixelPayload& pa_ = a.pixels[off];
            const PixelPayload& pb_ = b.pixels[off];
            if (pa_.full_count != pb_.full_count)
                return "solution count differs at " + loc() + ": " +
                       std::to_string(pa_.full_count) + " vs " + std::to_string(pb_.full_count);
            if (pa_.truncated != pb_.truncated) return "truncation flag differs at " + loc();
            if (!(pa_.set == pb_.set)) return "solution tuples differ at " + loc();
        }
    return std::nullopt;
}

// PA view of a PASS/hybrid result: pixel true iff its solution set is nonempty.
inline PixelResult project_boolean(const PixelResult& r) {
    if (r.mode == Mode::pa) throw std::invalid_argument("project_boolean needs a pass/hybrid result");
    PixelResult out;
    out.binning = r.binning;
    out.mode = Mode::pa;
    out.n_visible = r.n_visible;
    out.in_filter = r.in_filter;
    out.nonempty.assign(r.binning.count * r.binning.count, 0);
    for (std::size_t i = 0; i < out.nonempty.size(); ++i)
        out.nonempty[i] = r.pixels[i].full_count > 0 ? 1 : 0;
    return out;
}

} // namespace pass
