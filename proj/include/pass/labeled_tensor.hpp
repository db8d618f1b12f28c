#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "pass/semiring.hpp"

namespace pass {

// Chain variable id: u_i has id i. Hidden-equation chains may use negative ids.
using VarId = int;

// A tensor whose axes are named chain variables. Entries are stored sparsely
// (row-major flat offset over the ascending label order -> value); an absent
// entry is the semiring's additive unit, and stored entries never are.
template <class SR>
struct LabeledTensor {
    std::vector<VarId> labels;        // strictly ascending
    std::vector<std::size_t> extents; // parallel to labels
    std::map<std::size_t, typename SR::Value> entries;

    std::size_t rank() const { return labels.size(); }

    std::size_t size() const {
        std::size_t n = 1;
        for (std::size_t e : extents) n *= e;
        return n;
    }
};

namespace detail {

inline void unflatten(std::size_t off, const std::vector<std::size_t>& extents,
                      std::size_t* idx) {
    for (std::size_t d = extents.size(); d-- > 0;) {
        idx[d] = off % extents[d];
        off /= extents[d];
    }
}

} // namespace detail

// Pointwise semiring product over shared variables; disjoint labels broadcast
// (outer product). Result labels are the sorted union.
template <class SR>
LabeledTensor<SR> multiply_aligned(const LabeledTensor<SR>& a, const LabeledTensor<SR>& b) {
    // Shared labels must agree on extent.
    for (std::size_t i = 0; i < a.labels.size(); ++i) {
        auto it = std::lower_bound(b.labels.begin(), b.labels.end(), a.labels[i]);
        if (it != b.labels.end() && *it == a.labels[i] &&
            b.extents[static_cast<std::size_t>(it - b.labels.begin())] != a.extents[i])
            throw std::invalid_argument("extent mismatch on shared label");
    }

    LabeledTensor<SR> r;
    r.labels.resize(a.labels.size() + b.labels.size());
    auto end = std::set_union(a.labels.begin(), a.labels.end(), b.labels.begin(),
                              b.labels.end(), r.labels.begin());
    r.labels.resize(static_cast<std::size_t>(end - r.labels.begin()));
    r.extents.resize(r.labels.size());

    // For each result axis, where its index comes from (positions in a and b).
    const std::size_t npos = static_cast<std::size_t>(-1);
    std::vector<std::size_t> from_a(r.labels.size(), npos), from_b(r.labels.size(), npos);
    std::vector<std::size_t> shared_a, shared_b; // positions of shared labels
    for (std::size_t d = 0; d < r.labels.size(); ++d) {
        auto ia = std::lower_bound(a.labels.begin(), a.labels.end(), r.labels[d]);
        if (ia != a.labels.end() && *ia == r.labels[d])
            from_a[d] = static_cast<std::size_t>(ia - a.labels.begin());
        auto ib = std::lower_bound(b.labels.begin(), b.labels.end(), r.labels[d]);
        if (ib != b.labels.end() && *ib == r.labels[d])
            from_b[d] = static_cast<std::size_t>(ib - b.labels.begin());
        r.extents[d] = from_a[d] != npos ? a.extents[from_a[d]] : b.extents[from_b[d]];
        if (from_a[d] != npos && from_b[d] != npos) {
            shared_a.push_back(from_a[d]);
            shared_b.push_back(from_b[d]);
        }
    }

    // Group b's entries by their shared-label projection, then join with a.
    auto project = [](const std::size_t* idx, const std::vector<std::size_t>& dims,
                      const std::vector<std::size_t>& extents) {
        std::size_t key = 0;
        for (std::size_t d : dims) key = key * extents[d] + idx[d];
        return key;
    };

    std::unordered_map<std::size_t, std::vector<std::pair<std::size_t, const typename SR::Value*>>>
        groups;
    std::vector<std::size_t> bidx(b.labels.size());
    for (const auto& [off, val] : b.entries) {
        detail::unflatten(off, b.extents, bidx.data());
        groups[project(bidx.data(), shared_b, b.extents)].emplace_back(off, &val);
    }

    std::vector<std::size_t> aidx(a.labels.size());
    for (const auto& [aoff, aval] : a.entries) {
        detail::unflatten(aoff, a.extents, aidx.data());
        auto git = groups.find(project(aidx.data(), shared_a, a.extents));
        if (git == groups.end()) continue;
        for (const auto& [boff, bval] : git->second) {
            detail::unflatten(boff, b.extents, bidx.data());
            std::size_t roff = 0;
            for (std::size_t d = 0; d < r.labels.size(); ++d) {
                const std::size_t i = from_a[d] != npos ? aidx[from_a[d]] : bidx[from_b[d]];
                roff = roff * r.extents[d] + i;
            }
            // Every result label is covered by a or b, so distinct entry pairs
            // land on distinct offsets: plain insert, no accumulation.
            r.entries.emplace(roff, SR::mul(aval, *bval));
        }
    }
    return r;
}

// Remove one axis, combining entries along it with the semiring sum.
template <class SR>
LabeledTensor<SR> marginalize(const LabeledTensor<SR>& t, VarId label) {
    auto it = std::lower_bound(t.labels.begin(), t.labels.end(), label);
    if (it == t.labels.end() || *it != label)
        throw std::invalid_argument("marginalize: unknown label");
    const std::size_t drop = static_cast<std::size_t>(it - t.labels.begin());

    LabeledTensor<SR> r;
    for (std::size_t d = 0; d < t.labels.size(); ++d) {
        if (d == drop) continue;
        r.labels.push_back(t.labels[d]);
        r.extents.push_back(t.extents[d]);
    }

    std::vector<std::size_t> idx(t.labels.size());
    for (const auto& [off, val] : t.entries) {
        detail::unflatten(off, t.extents, idx.data());
        std::size_t roff = 0;
        for (std::size_t d = 0, rd = 0; d < t.labels.size(); ++d) {
            if (d == drop) continue;
            roff = roff * r.extents[rd] + idx[d];
            ++rd;
        }
        auto [pos, inserted] = r.entries.emplace(roff, val);
        if (!inserted) pos->second = SR::add(pos->second, val);
    }
    return r;
}

// Scalar (rank-0) tensor holding the multiplicative unit.
template <class SR>
LabeledTensor<SR> scalar_one() {
    LabeledTensor<SR> t;
    t.entries.emplace(0, SR::one());
    return t;
}

} // namespace pass
