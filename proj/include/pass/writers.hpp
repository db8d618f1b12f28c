#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <string>

#include "pass/config.hpp"
#include "pass/pipeline.hpp"

namespace pass {

// All output files are part of the bit-exact external contract: reals are
// rendered with 10 significant digits, key order and whitespace are fixed,
// and nothing depends on evaluation or thread order.
inline std::string fmt10(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

// ASCII portable graymap: "P2", "<width> <height>", "1", then one row per
// left-boundary bin (ascending), columns right-boundary bins (ascending);
// 1 = nonempty pixel.
inline void write_pixel_image(const PixelResult& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    const std::size_t nb = r.binning.count;
    out << "P2\n" << nb << ' ' << nb << "\n1\n";
    for (std::size_t li = 0; li < nb; ++li) {
        for (std::size_t ri = 0; ri < nb; ++ri) {
            if (ri) out << ' ';
            out << (r.in_scope(li, ri) && r.nonempty[r.index(li, ri)] ? 1 : 0);
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

// One JSON object per nonempty pixel, row-major pixel order, tuples sorted
// lexicographically. "count" is the untruncated solution count.
inline void write_solutions(const PixelResult& r, const std::string& path) {
    if (r.mode == Mode::pa)
        throw std::invalid_argument("write_solutions needs a pass or hybrid result");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    const std::size_t nb = r.binning.count;
    for (std::size_t li = 0; li < nb; ++li) {
        for (std::size_t ri = 0; ri < nb; ++ri) {
            if (!r.in_scope(li, ri)) continue;
            const PixelPayload& pp = r.pixels[r.index(li, ri)];
            if (pp.full_count == 0) continue;
            out << "{\"left\":" << fmt10(center(r.binning, li))
                << ",\"right\":" << fmt10(center(r.binning, ri))
                << ",\"count\":" << pp.full_count
                << ",\"truncated\":" << (pp.truncated ? "true" : "false") << ",\"tuples\":[";
            for (std::size_t t = 0; t < pp.set.count; ++t) {
                if (t) out << ',';
                out << '[';
                const double* tup = pp.set.tuple(t);
                for (int i = 0; i < pp.set.len; ++i) {
                    if (i) out << ',';
                    out << fmt10(tup[i]);
                }
                out << ']';
            }
            out << "]}\n";
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

struct SummaryInfo {
    std::string equation, mode, method;
    int cells = 0;
    std::size_t bins = 0;
    std::size_t pixels_total = 0;
    std::size_t pixels_nonempty = 0;
    bool has_tuple_stats = false;
    std::size_t total_tuples = 0;
    std::size_t truncated_pixels = 0;
    std::size_t max_tuples_per_pixel = 0;
    std::optional<double> max_modified_l2;
    std::optional<double> eq6_bound;
};

inline SummaryInfo summarize(const PixelResult& r, const RunConfig& rc) {
    SummaryInfo s;
    s.equation = rc.equation_text;
    s.mode = rc.mode_text;
    s.method = rc.method_text;
    s.cells = r.n_visible;
    s.bins = r.binning.count;
    const std::size_t nb = r.binning.count;
    for (std::size_t li = 0; li < nb; ++li)
        for (std::size_t ri = 0; ri < nb; ++ri) {
            if (!r.in_scope(li, ri)) continue;
            ++s.pixels_total;
            if (r.nonempty[r.index(li, ri)]) ++s.pixels_nonempty;
        }
    if (r.mode == Mode::pa) return s;

    s.has_tuple_stats = true;
    for (std::size_t li = 0; li < nb; ++li)
        for (std::size_t ri = 0; ri < nb; ++ri) {
            if (!r.in_scope(li, ri)) continue;
            const PixelPayload& pp = r.pixels[r.index(li, ri)];
            s.total_tuples += pp.full_count;
            if (pp.truncated) ++s.truncated_pixels;
            s.max_tuples_per_pixel = std::max(s.max_tuples_per_pixel, pp.full_count);
        }

    // The modified-L2 diagnostic and the Eq 6 bound apply to heat runs under
    // the epsilon method (the linear interpolant is heat's true steady state).
    if (rc.equation_text == "heat" && rc.problem.feas.method == Method::epsilon) {
        double maxl2 = 0.0;
        for (std::size_t li = 0; li < nb; ++li)
            for (std::size_t ri = 0; ri < nb; ++ri) {
                if (!r.in_scope(li, ri)) continue;
                const PixelPayload& pp = r.pixels[r.index(li, ri)];
                const double lv = center(r.binning, li), rv = center(r.binning, ri);
                for (std::size_t t = 0; t < pp.set.count; ++t)
                    maxl2 = std::max(maxl2,
                                     modified_l2(pp.set.tuple(t), pp.set.len, lv, rv));
            }
        s.max_modified_l2 = maxl2;
        double eps;
        if (rc.problem.feas.epsilon_override) {
            eps = *rc.problem.feas.epsilon_override;
        } else {
            Subcube sub;
            sub.centers.assign(3, r.binning.lo);
            sub.half_width = r.binning.bin_size / 2.0;
            eps = gradient_bound(rc.problem.stencil, sub) * subcube_radius(r.binning, 3);
        }
        if (eps > 0.0) s.eq6_bound = l2_bound(eps, r.n_visible);
    }
    return s;
}

inline void write_summary(const SummaryInfo& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "{\n";
    out << "  \"equation\": \"" << s.equation << "\",\n";
    out << "  \"mode\": \"" << s.mode << "\",\n";
    out << "  \"method\": \"" << s.method << "\",\n";
    out << "  \"cells\": " << s.cells << ",\n";
    out << "  \"bins\": " << s.bins << ",\n";
    out << "  \"pixels_total\": " << s.pixels_total << ",\n";
    out << "  \"pixels_nonempty\": " << s.pixels_nonempty;
    if (s.has_tuple_stats) {
        out << ",\n";
        out << "  \"total_tuples\": " << s.total_tuples << ",\n";
        out << "  \"truncated_pixels\": " << s.truncated_pixels << ",\n";
        out << "  \"max_tuples_per_pixel\": " << s.max_tuples_per_pixel;
        if (s.max_modified_l2) {
            out << ",\n  \"max_modified_l2\": " << fmt10(*s.max_modified_l2);
            if (s.eq6_bound) out << ",\n  \"l2_bound\": " << fmt10(*s.eq6_bound);
        }
    }
    out << "\n}\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace pass
