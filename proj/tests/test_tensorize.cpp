#include <catch2/catch_amalgamated.hpp>

#include <pass/stencil.hpp>
#include <pass/tensorize.hpp>

using namespace pass;

namespace {

std::size_t off3(std::size_t nb, std::size_t i, std::size_t j, std::size_t k) {
    return (i * nb + j) * nb + k;
}

} // namespace

TEST_CASE("epsilon method accepts residuals up to the gradient bound radius", "[tensorize]") {
    const Stencil heat = builtin_stencil("heat");
    const Binning b = make_binning(0.0, 1.0, 0.05);
    FeasibilityParams eps;
    eps.method = Method::epsilon;

    // heat epsilon = sqrt(6) * (b/2)*sqrt(3) ~= 0.10607: two-bin second
    // differences pass, three-bin ones do not
    const std::size_t linear[3] = {10, 12, 14};
    const std::size_t one_bin[3] = {20, 20, 19};
    const std::size_t two_bin[3] = {0, 0, 2};
    const std::size_t three_bin[3] = {0, 0, 3};
    const std::size_t steep[3] = {20, 16, 8};
    CHECK(epsilon_feasible(heat, b, linear, eps));
    CHECK(epsilon_feasible(heat, b, one_bin, eps));
    CHECK(epsilon_feasible(heat, b, two_bin, eps));
    CHECK_FALSE(epsilon_feasible(heat, b, three_bin, eps));
    CHECK_FALSE(epsilon_feasible(heat, b, steep, eps));
}

TEST_CASE("epsilon override replaces the per-subcube bound", "[tensorize]") {
    const Stencil heat = builtin_stencil("heat");
    const Binning b = make_binning(0.0, 1.0, 0.05);
    FeasibilityParams p;
    p.method = Method::epsilon;
    p.epsilon_override = 0.0; // exact roots only
    const std::size_t linear[3] = {10, 11, 12};
    const std::size_t one_bin[3] = {20, 20, 19};
    CHECK(epsilon_feasible(heat, b, linear, p));
    CHECK_FALSE(epsilon_feasible(heat, b, one_bin, p));
    p.epsilon_override = 0.3;
    const std::size_t steep[3] = {20, 16, 8}; // residual -0.2
    CHECK(epsilon_feasible(heat, b, steep, p));
}

TEST_CASE("bin rounding compares expanded bins with half-up ties", "[tensorize]") {
    const Binning b = make_binning(0.0, 1.0, 0.05);
    FeasibilityParams p;
    p.method = Method::binround;
    const std::size_t any[3] = {0, 0, 0};

    // constant stencils probe the residual grid directly
    CHECK(binround_feasible(parse_stencil("0.024", 3), b, any, p));
    CHECK_FALSE(binround_feasible(parse_stencil("0.025", 3), b, any, p)); // tie rounds up
    CHECK(binround_feasible(parse_stencil("0 - 0.025", 3), b, any, p));   // ...so -0.025 stays
    CHECK_FALSE(binround_feasible(parse_stencil("0 - 0.026", 3), b, any, p));

    const Stencil heat = builtin_stencil("heat");
    const std::size_t linear[3] = {10, 12, 14};
    const std::size_t one_bin[3] = {20, 20, 19}; // residual -0.05: epsilon-feasible, not binround
    CHECK(binround_feasible(heat, b, linear, p));
    CHECK_FALSE(binround_feasible(heat, b, one_bin, p));

    StencilParams pf;
    pf.mu = 1.0;
    pf.h = 1.0;
    const Stencil fisher = builtin_stencil("fisher", pf);
    CHECK(binround_feasible(fisher, b, any, p));
}

TEST_CASE("residual grid offset shifts the expanded bins", "[tensorize]") {
    const Binning b = make_binning(0.0, 1.0, 0.05);
    FeasibilityParams p;
    p.method = Method::binround;
    p.residual_grid_offset = 0.025;
    const std::size_t any[3] = {0, 0, 0};
    // bins sit at 0.025 + 0.05j and 0 rounds half-up into bin 0, so the
    // acceptance window becomes the asymmetric [0, 0.05)
    CHECK(binround_feasible(parse_stencil("0.024", 3), b, any, p));
    CHECK(binround_feasible(parse_stencil("0.049", 3), b, any, p));
    CHECK_FALSE(binround_feasible(parse_stencil("0.05", 3), b, any, p));
    CHECK_FALSE(binround_feasible(parse_stencil("0 - 0.001", 3), b, any, p));
}

TEST_CASE("cell tensors hold exactly the feasible entries", "[tensorize]") {
    const Stencil heat = builtin_stencil("heat");
    const Binning b = make_binning(0.0, 1.0, 0.05);
    FeasibilityParams eps;
    CellSpec cell;
    cell.first_var = 0;
    cell.arity = 3;
    cell.owner = 1;

    const auto boolean = build_cell_tensor<BoolSemiring>(heat, b, cell, eps);
    CHECK(boolean.labels == std::vector<VarId>{0, 1, 2});
    CHECK(boolean.extents == std::vector<std::size_t>{21, 21, 21});
    CHECK(boolean.entries.count(off3(21, 20, 20, 19)) == 1u);
    CHECK(boolean.entries.count(off3(21, 20, 16, 8)) == 0u);

    const auto sets = build_cell_tensor<SolutionSetSemiring>(heat, b, cell, eps);
    REQUIRE(sets.entries.count(off3(21, 20, 20, 19)) == 1u);
    CHECK(sets.entries.at(off3(21, 20, 20, 19)) == ss_singleton(1.0));
    CHECK(sets.entries.at(off3(21, 10, 12, 14)) == ss_singleton(center(b, 12)));

    const auto counts = build_cell_tensor<CountSemiring>(heat, b, cell, eps);
    CHECK(counts.entries.at(off3(21, 20, 20, 19)) == 1u);

    // all three semirings agree on which entries exist
    CHECK(boolean.entries.size() == sets.entries.size());
    CHECK(boolean.entries.size() == counts.entries.size());
    for (const auto& [off, val] : boolean.entries) {
        CHECK(sets.entries.count(off) == 1u);
        CHECK(counts.entries.count(off) == 1u);
    }
}

TEST_CASE("cells owning nothing contribute unit sets", "[tensorize]") {
    const Stencil heat = builtin_stencil("heat");
    const Binning b = make_binning(0.0, 0.8, 0.2);
    FeasibilityParams eps;
    CellSpec cell;
    cell.first_var = -1;
    cell.arity = 3;
    cell.owner = CellSpec::kOwnsNothing;
    const auto t = build_cell_tensor<SolutionSetSemiring>(heat, b, cell, eps);
    CHECK(t.labels == std::vector<VarId>{-1, 0, 1});
    REQUIRE(!t.entries.empty());
    for (const auto& [off, val] : t.entries) CHECK(val == ss_unit());
}

TEST_CASE("two-point cells own their left variable", "[tensorize]") {
    StencilParams pb;
    pb.h = 0.05;
    const Stencil bbm = builtin_stencil("bbm", pb);
    const Binning b = make_binning(0.0, 0.8, 0.2);
    FeasibilityParams br;
    br.method = Method::binround;
    CellSpec cell;
    cell.first_var = 2;
    cell.arity = 2;
    cell.owner = 2;
    const auto t = build_cell_tensor<SolutionSetSemiring>(bbm, b, cell, br);
    CHECK(t.labels == std::vector<VarId>{2, 3});
    // bbm at h=b only keeps the diagonal; each entry carries its left center
    for (std::size_t j = 0; j < b.count; ++j) {
        REQUIRE(t.entries.count(j * b.count + j) == 1u);
        CHECK(t.entries.at(j * b.count + j) == ss_singleton(center(b, j)));
    }
    CHECK(t.entries.size() == b.count);
}

TEST_CASE("parallel fill is bit-identical to sequential", "[tensorize]") {
    const Stencil heat = builtin_stencil("heat");
    const Binning b = make_binning(0.0, 1.0, 0.05); // 9261 entries: above parallel threshold
    FeasibilityParams eps;
    CellSpec cell;
    cell.first_var = 0;
    cell.arity = 3;
    cell.owner = 1;
    const auto seq = build_cell_tensor<SolutionSetSemiring>(heat, b, cell, eps, 1);
    const auto par = build_cell_tensor<SolutionSetSemiring>(heat, b, cell, eps, 4);
    REQUIRE(seq.entries.size() == par.entries.size());
    CHECK(seq.entries == par.entries);
}

TEST_CASE("cell arity must match the stencil", "[tensorize]") {
    const Stencil heat = builtin_stencil("heat");
    const Binning b = make_binning(0.0, 1.0, 0.05);
    CellSpec cell;
    cell.first_var = 0;
    cell.arity = 2;
    cell.owner = 0;
    CHECK_THROWS_AS(build_cell_tensor<BoolSemiring>(heat, b, cell, {}), std::invalid_argument);
}
