#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace pass {

// Closed-interval arithmetic, used to bound stencil gradients over subcubes.
// Division by an interval containing 0 widens to the whole line rather than
// erroring: a gradient bound of +inf is conservative (it only loosens epsilon).
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    static Interval point(double v) { return {v, v}; }
    static Interval whole() {
        const double inf = std::numeric_limits<double>::infinity();
        return {-inf, inf};
    }
    bool is_whole() const { return std::isinf(lo) || std::isinf(hi); }
};

inline Interval iv_add(Interval a, Interval b) { return {a.lo + b.lo, a.hi + b.hi}; }
inline Interval iv_sub(Interval a, Interval b) { return {a.lo - b.hi, a.hi - b.lo}; }
inline Interval iv_neg(Interval a) { return {-a.hi, -a.lo}; }

inline Interval iv_mul(Interval a, Interval b) {
    if (a.is_whole() || b.is_whole()) return Interval::whole();
    const double p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    return {std::min(std::min(p1, p2), std::min(p3, p4)),
            std::max(std::max(p1, p2), std::max(p3, p4))};
}

inline Interval iv_div(Interval a, Interval b) {
    if (b.lo <= 0.0 && b.hi >= 0.0) return Interval::whole();
    return iv_mul(a, {1.0 / b.hi, 1.0 / b.lo});
}

inline Interval iv_pow(Interval a, int p) {
    if (p == 0) return Interval::point(1.0);
    if (p < 0) return iv_div(Interval::point(1.0), iv_pow(a, -p));
    if (a.is_whole()) return Interval::whole();
    const double plo = std::pow(a.lo, p), phi = std::pow(a.hi, p);
    if (p % 2 != 0) return {plo, phi};
    Interval r{std::min(plo, phi), std::max(plo, phi)};
    if (a.lo <= 0.0 && a.hi >= 0.0) r.lo = 0.0;
    return r;
}

inline Interval iv_exp(Interval a) { return {std::exp(a.lo), std::exp(a.hi)}; }

// True iff [lo, hi] contains a point offset + period*k for some integer k.
inline bool iv_contains_periodic(double lo, double hi, double offset, double period) {
    const double kmin = std::ceil((lo - offset) / period);
    return offset + period * kmin <= hi;
}

inline Interval iv_sin(Interval a) {
    if (a.is_whole() || a.hi - a.lo >= 2.0 * M_PI) return {-1.0, 1.0};
    const double slo = std::sin(a.lo), shi = std::sin(a.hi);
    Interval r{std::min(slo, shi), std::max(slo, shi)};
    if (iv_contains_periodic(a.lo, a.hi, M_PI / 2.0, 2.0 * M_PI)) r.hi = 1.0;
    if (iv_contains_periodic(a.lo, a.hi, -M_PI / 2.0, 2.0 * M_PI)) r.lo = -1.0;
    return r;
}

inline Interval iv_cos(Interval a) {
    if (a.is_whole() || a.hi - a.lo >= 2.0 * M_PI) return {-1.0, 1.0};
    const double clo = std::cos(a.lo), chi = std::cos(a.hi);
    Interval r{std::min(clo, chi), std::max(clo, chi)};
    if (iv_contains_periodic(a.lo, a.hi, 0.0, 2.0 * M_PI)) r.hi = 1.0;
    if (iv_contains_periodic(a.lo, a.hi, M_PI, 2.0 * M_PI)) r.lo = -1.0;
    return r;
}

// Largest magnitude attained over the interval.
inline double iv_abs_max(Interval a) { return std::max(std::fabs(a.lo), std::fabs(a.hi)); }

} // namespace pass
