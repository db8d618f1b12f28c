#include <catch2/catch_amalgamated.hpp>

#include <pass/pipeline.hpp>

#include <cmath>

using namespace pass;

namespace {

Problem heat_problem(int n, double lo, double hi, double b) {
    Problem p;
    p.stencil = builtin_stencil("heat");
    p.binning = make_binning(lo, hi, b);
    p.n_visible = n;
    p.feas.method = Method::epsilon;
    return p;
}

Problem fisher_problem(int n, double mu, double h) {
    StencilParams sp;
    sp.mu = mu;
    sp.h = h;
    Problem p;
    p.stencil = builtin_stencil("fisher", sp);
    p.binning = make_binning(0.0, 2.0, 0.05);
    p.n_visible = n;
    p.feas.method = Method::binround;
    return p;
}

// Per-pixel payload equality that ignores the mode tag (pass vs hybrid).
void check_same_payloads(const PixelResult& a, const PixelResult& b) {
    REQUIRE(a.binning.count == b.binning.count);
    REQUIRE(a.nonempty == b.nonempty);
    REQUIRE(a.pixels.size() == b.pixels.size());
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        REQUIRE(a.pixels[i].full_count == b.pixels[i].full_count);
        REQUIRE(a.pixels[i].truncated == b.pixels[i].truncated);
        REQUIRE(a.pixels[i].set == b.pixels[i].set);
    }
}

SolutionSet constant_tuple(const Binning& b, std::size_t j, int n) {
    std::vector<double> t(static_cast<std::size_t>(n), center(b, j));
    return ss_from_tuples(n, {t});
}

} // namespace

TEST_CASE("modified_l2 against the linear interpolant", "[pipeline]") {
    CHECK(modified_l2({0.0, 1.0, 2.0, 3.0}, 0.0, 3.0) == 0.0);
    CHECK(modified_l2({0.3, 0.4, 0.5, 0.6}, 0.3, 0.6) == Catch::Approx(0.0).margin(1e-15));
    // n=2: the endpoints fix the line
    CHECK(modified_l2({1.0, 0.1}, 1.0, 0.1) == Catch::Approx(0.0).margin(1e-15));
    // the paper's Fig 4 black curve vs the 1.0 -> 0.1 interpolant
    const std::vector<double> curve{1.0, 1.0, 0.95, 0.85, 0.7, 0.55, 0.35, 0.1};
    CHECK(modified_l2(curve, 1.0, 0.1) ==
          Catch::Approx(0.46136443605586119).epsilon(1e-12));
    CHECK_THROWS_AS(modified_l2({1.0}, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("l2_bound follows eq 6", "[pipeline]") {
    const double eps = std::sqrt(6.0) * ((0.05 / 2.0) * std::sqrt(3.0));
    CHECK(eps == Catch::Approx(0.10606601717798211).epsilon(1e-14));
    CHECK(l2_bound(eps, 8) == Catch::Approx(3.3941125496954276).epsilon(1e-12));
    CHECK(l2_bound(2.0, 1) == 2.0);           // ceil(1/2) = 1
    CHECK(l2_bound(1.0, 4) == l2_bound(1.0, 3)); // same ceil
    CHECK_THROWS_AS(l2_bound(0.0, 8), std::invalid_argument);
}

TEST_CASE("sweep equals brute force on small problems", "[pipeline]") {
    std::vector<Problem> problems;
    problems.push_back(heat_problem(3, 0.0, 0.8, 0.2));
    problems.push_back(fisher_problem(4, 1.0, 1.0));
    problems.back().binning = make_binning(0.0, 1.2, 0.2);
    {
        StencilParams sp;
        sp.h = 0.05;
        Problem p;
        p.stencil = builtin_stencil("bbm", sp);
        p.binning = make_binning(0.0, 0.8, 0.2);
        p.n_visible = 3;
        p.feas.method = Method::binround;
        problems.push_back(p);
    }
    {
        StencilParams sp;
        sp.h = 1.0;
        Problem p;
        p.stencil = builtin_stencil("sine_gordon", sp);
        p.binning = make_binning(0.0, 0.8, 0.2);
        p.n_visible = 2;
        p.feas.method = Method::binround;
        problems.push_back(p);
    }
    // hidden equations put extra unowned cells at both ends
    problems.push_back(heat_problem(3, 0.0, 0.8, 0.2));
    problems.back().hidden_equations = true;

    for (Problem& p : problems) {
        for (const Mode mode : {Mode::pa, Mode::pass, Mode::hybrid}) {
            p.mode = mode;
            const PixelResult got = solve(p);
            const PixelResult want = brute_force_solve(p);
            const auto mismatch = diff_results(got, want);
            INFO(p.stencil.name << " mode " << static_cast<int>(mode)
                                << (p.hidden_equations ? " hidden" : ""));
            if (mismatch) FAIL_CHECK(*mismatch);
            CHECK(!mismatch);
        }
    }
}

TEST_CASE("heat full grid reproduces the frozen run", "[pipeline]") {
    Problem p = heat_problem(8, 0.0, 1.0, 0.05);
    p.mode = Mode::hybrid;
    const PixelResult r = solve(p);

    const std::size_t nb = r.binning.count;
    REQUIRE(nb == 21u);
    std::size_t nonempty = 0, total = 0, max_per_pixel = 0;
    double max_l2 = 0.0;
    for (std::size_t li = 0; li < nb; ++li)
        for (std::size_t ri = 0; ri < nb; ++ri) {
            const PixelPayload& px = r.pixels[r.index(li, ri)];
            if (px.full_count == 0) continue;
            ++nonempty;
            total += px.full_count;
            max_per_pixel = std::max(max_per_pixel, px.full_count);
            CHECK(!px.truncated);
            const double left = center(r.binning, li), right = center(r.binning, ri);
            for (std::size_t i = 0; i < px.set.count; ++i) {
                const double* t = px.set.tuple(i);
                // exposed coordinates are the boundary values themselves
                REQUIRE(t[0] == left);
                REQUIRE(t[7] == right);
                max_l2 = std::max(max_l2, modified_l2(t, 8, left, right));
            }
        }
    CHECK(nonempty == 441u);
    CHECK(total == 789415u);
    CHECK(max_per_pixel == 2229u);
    CHECK(max_l2 == Catch::Approx(1.1832159566199234).epsilon(1e-12));

    const double eps = std::sqrt(6.0) * ((0.05 / 2.0) * std::sqrt(3.0));
    CHECK(max_l2 <= l2_bound(eps, 8));

    // the paper's example pixel
    const PixelPayload& px = r.pixels[r.index(20, 2)];
    CHECK(px.full_count == 726u);
    double pixel_max = 0.0;
    for (std::size_t i = 0; i < px.set.count; ++i)
        pixel_max = std::max(pixel_max, modified_l2(px.set.tuple(i), 8, 1.0, 0.1));
    CHECK(pixel_max == Catch::Approx(0.59851005481469222).epsilon(1e-12));

    // boundary-swap symmetry: heat is reversal-invariant
    for (const std::size_t li : {0u, 5u, 10u, 20u})
        for (const std::size_t ri : {2u, 10u, 15u}) {
            const PixelPayload& fwd = r.pixels[r.index(li, ri)];
            const PixelPayload& rev = r.pixels[r.index(ri, li)];
            REQUIRE(fwd.full_count == rev.full_count);
            SolutionSet flipped = ss_reverse_coords(rev.set);
            REQUIRE(fwd.set == flipped);
        }

    // re-verify a sampled pixel tuple-by-tuple against the cell tests
    const FeasibilityParams fp;
    const Stencil& heat = p.stencil;
    auto cell_ok = [&](std::size_t a, std::size_t m, std::size_t c) {
        const std::size_t idx[3] = {a, m, c};
        return epsilon_feasible(heat, r.binning, idx, fp);
    };
    for (std::size_t i = 0; i < px.set.count; ++i) {
        const double* t = px.set.tuple(i);
        std::size_t idx[8];
        for (int j = 0; j < 8; ++j) idx[j] = index_of(r.binning, t[j]);
        for (int j = 1; j < 7; ++j) REQUIRE(cell_ok(idx[j - 1], idx[j], idx[j + 1]));
        bool left_end = false, right_end = false;
        for (std::size_t h = 0; h < nb; ++h) {
            left_end = left_end || cell_ok(h, idx[0], idx[1]);
            right_end = right_end || cell_ok(idx[6], idx[7], h);
        }
        REQUIRE(left_end);
        REQUIRE(right_end);
    }

    // hybrid agrees with the global solution-set sweep
    Problem q = p;
    q.mode = Mode::pass;
    check_same_payloads(solve(q), r);

    // and the boolean projection agrees with pa mode
    Problem bp = p;
    bp.mode = Mode::pa;
    const PixelResult pa_run = solve(bp);
    const auto mismatch = diff_results(project_boolean(r), pa_run);
    if (mismatch) FAIL_CHECK(*mismatch);
    CHECK(!mismatch);
}

TEST_CASE("pixel filters restrict scope without changing payloads", "[pipeline]") {
    Problem p = heat_problem(8, 0.0, 1.0, 0.05);
    p.mode = Mode::hybrid;
    const PixelResult full = solve(p);

    Problem f = p;
    f.boundaries = {{{1.0, 0.1}, {0.5, 0.5}}};
    const PixelResult filtered = solve(f);
    REQUIRE(filtered.in_filter.has_value());
    std::size_t in_scope = 0;
    for (std::size_t li = 0; li < 21; ++li)
        for (std::size_t ri = 0; ri < 21; ++ri)
            if (filtered.in_scope(li, ri)) ++in_scope;
    CHECK(in_scope == 2u);
    CHECK(filtered.in_scope(20, 2));
    CHECK(filtered.in_scope(10, 10));
    CHECK(filtered.pixels[filtered.index(20, 2)].set == full.pixels[full.index(20, 2)].set);
    CHECK(filtered.pixels[filtered.index(10, 10)].full_count ==
          full.pixels[full.index(10, 10)].full_count);

    Problem bad = p;
    bad.boundaries = {{{0.024, 0.1}}}; // not a bin center
    CHECK_THROWS_AS(solve(bad), std::invalid_argument);
    Problem outside = p;
    outside.boundaries = {{{1.5, 0.1}}};
    CHECK_THROWS_AS(solve(outside), std::invalid_argument);
}

TEST_CASE("truncation keeps the lexicographically smallest tuples", "[pipeline]") {
    Problem p = heat_problem(8, 0.0, 1.0, 0.05);
    p.boundaries = {{{1.0, 0.1}}};
    p.mode = Mode::pass;
    const PixelResult full = solve(p);
    const PixelPayload& fp = full.pixels[full.index(20, 2)];
    REQUIRE(fp.full_count == 726u);
    REQUIRE(!fp.truncated);

    Problem t = p;
    t.max_solutions_per_pixel = 100;
    const PixelResult cut = solve(t);
    const PixelPayload& cp = cut.pixels[cut.index(20, 2)];
    CHECK(cp.truncated);
    CHECK(cp.full_count == 726u); // the count survives truncation
    CHECK(cp.set.count == 100u);
    CHECK(cp.set == ss_truncate(fp.set, 100));
}

TEST_CASE("pa mode carries no payloads", "[pipeline]") {
    Problem p = heat_problem(3, 0.0, 0.8, 0.2);
    p.mode = Mode::pa;
    const PixelResult r = solve(p);
    CHECK(r.pixels.empty());
    CHECK(!r.nonempty.empty());
}

TEST_CASE("fisher keeps only the constant steady states at n=16", "[pipeline]") {
    Problem p = fisher_problem(16, 1.0, 1.0);
    p.mode = Mode::pass;
    const PixelResult r = solve(p);
    std::size_t nonempty = 0;
    for (std::size_t li = 0; li < 41; ++li)
        for (std::size_t ri = 0; ri < 41; ++ri)
            if (r.nonempty[r.index(li, ri)]) ++nonempty;
    CHECK(nonempty == 2u);
    CHECK(r.pixels[r.index(0, 0)].set == constant_tuple(r.binning, 0, 16));
    CHECK(r.pixels[r.index(20, 20)].set == constant_tuple(r.binning, 20, 16));
}

TEST_CASE("sine-gordon at h=0.25 resolves the three flat states", "[pipeline]") {
    StencilParams sp;
    sp.h = 0.25;
    Problem p;
    p.stencil = builtin_stencil("sine_gordon", sp);
    p.binning = make_binning(0.0, 7.0, 0.2);
    p.n_visible = 8;
    p.feas.method = Method::binround;
    p.mode = Mode::pass;
    const PixelResult r = solve(p);
    std::vector<std::pair<std::size_t, std::size_t>> found;
    for (std::size_t li = 0; li < 36; ++li)
        for (std::size_t ri = 0; ri < 36; ++ri)
            if (r.nonempty[r.index(li, ri)]) found.emplace_back(li, ri);
    const std::vector<std::pair<std::size_t, std::size_t>> want{{0, 0}, {16, 16}, {31, 31}};
    REQUIRE(found == want); // flat states near 0, pi, 2*pi only
    for (const auto& [li, ri] : want) {
        const PixelPayload& px = r.pixels[r.index(li, ri)];
        CHECK(px.full_count == 1u);
        CHECK(px.set == constant_tuple(r.binning, li, 8));
    }
}

TEST_CASE("brute force refuses oversized problems", "[pipeline]") {
    Problem p = heat_problem(8, 0.0, 1.0, 0.05); // 21^10 assignments
    CHECK_THROWS_AS(brute_force_solve(p), std::runtime_error);
}

TEST_CASE("project_boolean strips payloads", "[pipeline]") {
    Problem p = fisher_problem(4, 1.0, 1.0);
    p.binning = make_binning(0.0, 1.2, 0.2);
    p.mode = Mode::pass;
    const PixelResult r = solve(p);
    const PixelResult b = project_boolean(r);
    CHECK(b.mode == Mode::pa);
    CHECK(b.pixels.empty());
    CHECK(b.nonempty == r.nonempty);
}
