#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace pass {

// A finite set of equal-length tuples of values: the PASS semiring element.
// Tuples are stored flattened, lexicographically sorted and duplicate-free;
// this canonical form makes all downstream output deterministic.
//
// The empty set {} is the additive unit (count == 0, len normalized to 0);
// the set {()} holding one empty tuple (count == 1, len == 0) is the
// multiplicative unit.
struct SolutionSet {
    int len = 0;
    std::size_t count = 0;
    std::vector<double> flat; // count * len values

    bool empty() const { return count == 0; }

    const double* tuple(std::size_t i) const { return flat.data() + i * static_cast<std::size_t>(len); }

    friend bool operator==(const SolutionSet& a, const SolutionSet& b) {
        return a.len == b.len && a.count == b.count && a.flat == b.flat;
    }
};

inline SolutionSet ss_empty() { return {}; }

inline SolutionSet ss_unit() {
    SolutionSet s;
    s.len = 0;
    s.count = 1;
    return s;
}

inline SolutionSet ss_singleton(double v) {
    SolutionSet s;
    s.len = 1;
    s.count = 1;
    s.flat.push_back(v);
    return s;
}

inline bool lex_less(const double* a, const double* b, int len) {
    for (int i = 0; i < len; ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return false;
}

inline bool lex_eq(const double* a, const double* b, int len) {
    for (int i = 0; i < len; ++i)
        if (a[i] != b[i]) return false;
    return true;
}

// Build a canonical set from arbitrary equal-length tuples (sorts, dedupes).
inline SolutionSet ss_from_tuples(int len, std::vector<std::vector<double>> tuples) {
    for (const auto& t : tuples)
        if (static_cast<int>(t.size()) != len)
            throw std::invalid_argument("tuple length mismatch");
    std::sort(tuples.begin(), tuples.end());
    tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
    SolutionSet s;
    s.len = tuples.empty() ? 0 : len;
    s.count = tuples.size();
    s.flat.reserve(s.count * static_cast<std::size_t>(s.len));
    for (const auto& t : tuples)
        s.flat.insert(s.flat.end(), t.begin(), t.end());
    return s;
}

// Cartesian product with tuple concatenation. Enumerating a-major keeps the
// result sorted (the a-tuple is the lexicographic prefix), and no duplicates
// can arise from distinct input pairs, so no re-canonicalization is needed.
inline SolutionSet ss_mul(const SolutionSet& a, const SolutionSet& b) {
    if (a.count == 0 || b.count == 0) return {};
    SolutionSet r;
    r.len = a.len + b.len;
    r.count = a.count * b.count;
    r.flat.reserve(r.count * static_cast<std::size_t>(r.len));
    for (std::size_t i = 0; i < a.count; ++i) {
        const double* at = a.tuple(i);
        for (std::size_t j = 0; j < b.count; ++j) {
            const double* bt = b.tuple(j);
            r.flat.insert(r.flat.end(), at, at + a.len);
            r.flat.insert(r.flat.end(), bt, bt + b.len);
        }
    }
    return r;
}

// Set union (sorted merge of the canonical forms).
inline SolutionSet ss_add(const SolutionSet& a, const SolutionSet& b) {
    if (a.count == 0) return b;
    if (b.count == 0) return a;
    if (a.len != b.len)
        throw std::invalid_argument("cannot union solution sets of different tuple lengths");
    const int len = a.len;
    SolutionSet r;
    r.len = len;
    r.flat.reserve(a.flat.size() + b.flat.size());
    std::size_t i = 0, j = 0;
    while (i < a.count && j < b.count) {
        const double* at = a.tuple(i);
        const double* bt = b.tuple(j);
        if (lex_eq(at, bt, len)) {
            r.flat.insert(r.flat.end(), at, at + len);
            ++i;
            ++j;
        } else if (lex_less(at, bt, len)) {
            r.flat.insert(r.flat.end(), at, at + len);
            ++i;
        } else {
            r.flat.insert(r.flat.end(), bt, bt + len);
            ++j;
        }
    }
    for (; i < a.count; ++i) r.flat.insert(r.flat.end(), a.tuple(i), a.tuple(i) + len);
    for (; j < b.count; ++j) r.flat.insert(r.flat.end(), b.tuple(j), b.tuple(j) + len);
    r.count = len > 0 ? r.flat.size() / static_cast<std::size_t>(len) : 1;
    return r;
}

// Keep only the max_count lexicographically smallest tuples.
inline SolutionSet ss_truncate(const SolutionSet& s, std::size_t max_count) {
    if (s.count <= max_count) return s;
    SolutionSet r;
    r.len = max_count > 0 ? s.len : 0; // keep the empty set canonical
    r.count = max_count;
    r.flat.assign(s.flat.begin(), s.flat.begin() + max_count * static_cast<std::size_t>(s.len));
    return r;
}

// Reverse every tuple's coordinates, then restore canonical order.
inline SolutionSet ss_reverse_coords(const SolutionSet& s) {
    std::vector<std::vector<double>> tuples;
    tuples.reserve(s.count);
    for (std::size_t i = 0; i < s.count; ++i) {
        std::vector<double> t(s.tuple(i), s.tuple(i) + s.len);
        std::reverse(t.begin(), t.end());
        tuples.push_back(std::move(t));
    }
    return ss_from_tuples(s.len, std::move(tuples));
}

} // namespace pass
