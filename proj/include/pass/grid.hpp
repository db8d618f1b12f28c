#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace pass {

// Round to the nearest integer with halfway ties toward +infinity
// (the paper's "rounding up" convention, applied uniformly).
inline long round_half_up(double x) {
    return static_cast<long>(std::floor(x + 0.5));
}

// A 1-D grid of bin center values. Bins are value points c_j = lo + j*bin_size,
// each surrounded by a subcube of half-width bin_size/2.
struct Binning {
    double lo = 0.0;
    double hi = 0.0;
    double bin_size = 0.0;
    std::size_t count = 0;
};

inline Binning make_binning(double lo, double hi, double bin_size) {
    if (!(bin_size > 0.0))
        throw std::invalid_argument("bin_size must be positive");
    if (!(hi > lo))
        throw std::invalid_argument("range must satisfy hi > lo");
    const double steps = (hi - lo) / bin_size;
    const double nearest = std::round(steps);
    // The range must be an exact multiple of the bin size; reject rather than
    // silently stretch, so pixel-array axes always align with boundary values.
    if (std::fabs(steps - nearest) > 1e-9)
        throw std::invalid_argument("range is not an integer multiple of bin_size");
    Binning b;
    b.lo = lo;
    b.hi = hi;
    b.bin_size = bin_size;
    b.count = static_cast<std::size_t>(nearest) + 1;
    return b;
}

inline double center(const Binning& b, std::size_t j) {
    if (j >= b.count)
        throw std::out_of_range("bin index out of range");
    return b.lo + static_cast<double>(j) * b.bin_size;
}

// Nearest bin index of a value, ties broken upward. Values may lie anywhere in
// the padded range [lo - b/2, hi + b/2]; the top pad edge maps to the last bin.
inline std::size_t index_of(const Binning& b, double v) {
    const double half = b.bin_size / 2.0;
    if (v < b.lo - half || v > b.hi + half)
        throw std::out_of_range("value outside the padded binning range");
    long j = round_half_up((v - b.lo) / b.bin_size);
    if (j < 0) j = 0;
    if (j >= static_cast<long>(b.count)) j = static_cast<long>(b.count) - 1;
    return static_cast<std::size_t>(j);
}

// The k-dimensional box of values represented by one tensor entry.
struct Subcube {
    std::vector<double> centers;
    double half_width = 0.0;
};

// Largest distance from the center of a k-dimensional subcube to its boundary.
inline double subcube_radius(const Binning& b, std::size_t k) {
    if (k < 1)
        throw std::invalid_argument("subcube dimension must be at least 1");
    return (b.bin_size / 2.0) * std::sqrt(static_cast<double>(k));
}

} // namespace pass
