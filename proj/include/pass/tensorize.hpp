#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "pass/chain.hpp"
#include "pass/grid.hpp"
#include "pass/labeled_tensor.hpp"
#include "pass/stencil.hpp"

namespace pass {

enum class Method { epsilon, binround };

struct FeasibilityParams {
    Method method = Method::epsilon;
    // Fixed epsilon instead of the per-subcube gradient bound; >= 0
    // (0 accepts exactly the entries whose center residual is exactly 0).
    std::optional<double> epsilon_override;
    // The expanded-bin offset c in b_j = b*j + c.
    double residual_grid_offset = 0.0;
};

namespace detail {

inline void centers_of(const Binning& b, const std::size_t* idx, int k, double* out) {
    for (int i = 0; i < k; ++i) out[i] = center(b, idx[i]);
}

} // namespace detail

// Epsilon method (§3.1): accept a subcube iff |residual(centers)| <= epsilon,
// epsilon = (gradient-magnitude bound over the subcube) * (subcube radius).
inline bool epsilon_feasible(const Stencil& s, const Binning& b, const std::size_t* idx,
                             const FeasibilityParams& params) {
    const int k = s.arity;
    double c[3];
    detail::centers_of(b, idx, k, c);
    const double r = s.residual(c);
    double eps;
    if (params.epsilon_override) {
        eps = *params.epsilon_override;
    } else {
        Subcube sub;
        sub.centers.assign(c, c + k);
        sub.half_width = b.bin_size / 2.0;
        eps = gradient_bound(s, sub) * subcube_radius(b, static_cast<std::size_t>(k));
    }
    return std::fabs(r) <= eps;
}

// Bin-rounding method (§3.2): accept iff the residual and 0 round to the same
// expanded bin b_j = b*j + c (nearest bin, ties upward).
inline bool binround_feasible(const Stencil& s, const Binning& b, const std::size_t* idx,
                              const FeasibilityParams& params) {
    const int k = s.arity;
    double c[3];
    detail::centers_of(b, idx, k, c);
    const double r = s.residual(c);
    const double off = params.residual_grid_offset;
    return round_half_up((r - off) / b.bin_size) == round_half_up((0.0 - off) / b.bin_size);
}

inline bool feasible(const Stencil& s, const Binning& b, const std::size_t* idx,
                     const FeasibilityParams& params) {
    return params.method == Method::epsilon ? epsilon_feasible(s, b, idx, params)
                                            : binround_feasible(s, b, idx, params);
}

// Build one cell's feasibility tensor over the semiring SR. Axes are the
// cell's variables (ascending); for the solution-set semiring a feasible entry
// is {(center of the owned variable)}, or {()} for cells owning nothing.
template <class SR>
LabeledTensor<SR> build_cell_tensor(const Stencil& s, const Binning& b, const CellSpec& cell,
                                    const FeasibilityParams& params, unsigned threads = 1) {
    const int k = s.arity;
    if (cell.arity != k)
        throw std::invalid_argument("cell arity does not match stencil arity");

    LabeledTensor<SR> t;
    for (int i = 0; i < k; ++i) {
        t.labels.push_back(cell.first_var + i);
        t.extents.push_back(b.count);
    }
    const int owner_axis =
        cell.owner == CellSpec::kOwnsNothing ? -1 : static_cast<int>(cell.owner - cell.first_var);

    std::size_t total = 1;
    for (int i = 0; i < k; ++i) total *= b.count;

    using Entry = std::pair<std::size_t, typename SR::Value>;
    auto fill_range = [&](std::size_t lo, std::size_t hi, std::vector<Entry>& out) {
        std::size_t idx[3] = {0, 0, 0};
        for (std::size_t off = lo; off < hi; ++off) {
            std::size_t rem = off;
            for (int d = k; d-- > 0;) {
                idx[d] = rem % b.count;
                rem /= b.count;
            }
            if (!feasible(s, b, idx, params)) continue;
            if constexpr (std::is_same_v<SR, SolutionSetSemiring>) {
                out.emplace_back(off, owner_axis < 0
                                          ? ss_unit()
                                          : ss_singleton(center(b, idx[owner_axis])));
            } else {
                out.emplace_back(off, SR::one());
            }
        }
    };

    // Entries are a pure function of the index, so a chunked parallel fill
    // merged in chunk order is bit-identical to the sequential fill.
    if (threads <= 1 || total < 4096) {
        std::vector<Entry> entries;
        fill_range(0, total, entries);
        for (auto& e : entries) t.entries.emplace(e.first, std::move(e.second));
    } else {
        const unsigned nt = std::min<unsigned>(threads, 64);
        std::vector<std::vector<Entry>> parts(nt);
        std::vector<std::thread> workers;
        for (unsigned w = 0; w < nt; ++w) {
            const std::size_t lo = total * w / nt;
            const std::size_t hi = total * (w + 1) / nt;
            workers.emplace_back([&, lo, hi, w] { fill_range(lo, hi, parts[w]); });
        }
        for (auto& th : workers) th.join();
        for (auto& part : parts)
            for (auto& e : part) t.entries.emplace(e.first, std::move(e.second));
    }
    return t;
}

} // namespace pass
