#pragma once

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pass/config.hpp"
#include "pass/pipeline.hpp"
#include "pass/writers.hpp"

namespace pass::cli {

// Exit codes: 0 success, 1 configuration error, 2 runtime error, 3 check mismatch.

namespace detail {

struct Options {
    std::string config;
    std::string mode;
    std::string method;
    std::string out_dir;
    long max_solutions = 0;
    unsigned threads = 1;
};

inline void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--config", o.config, "path to the run configuration file")->required();
    sub->add_option("--mode", o.mode, "override mode: pa, pass, or hybrid");
    sub->add_option("--method", o.method, "override method: epsilon or binround");
    sub->add_option("--out-dir", o.out_dir, "override the output directory");
    sub->add_option("--max-solutions", o.max_solutions,
                    "override max solutions kept per pixel");
    sub->add_option("--threads", o.threads, "worker threads (output is identical for any value)");
}

inline void apply_overrides(RunConfig& rc, const Options& o) {
    if (!o.mode.empty()) {
        if (o.mode == "pa") rc.problem.mode = Mode::pa;
        else if (o.mode == "pass") rc.problem.mode = Mode::pass;
        else if (o.mode == "hybrid") rc.problem.mode = Mode::hybrid;
        else throw config_error("--mode: expected pa, pass, or hybrid");
        rc.mode_text = o.mode;
    }
    if (!o.method.empty()) {
        if (o.method == "epsilon") rc.problem.feas.method = Method::epsilon;
        else if (o.method == "binround") rc.problem.feas.method = Method::binround;
        else throw config_error("--method: expected epsilon or binround");
        rc.method_text = o.method;
    }
    if (!o.out_dir.empty()) rc.out_dir = o.out_dir;
    if (o.max_solutions != 0) {
        if (o.max_solutions < 1) throw config_error("--max-solutions: must be positive");
        rc.problem.max_solutions_per_pixel = static_cast<std::size_t>(o.max_solutions);
    }
    if (o.threads < 1) throw config_error("--threads: must be at least 1");
}

inline void write_outputs(const PixelResult& r, const RunConfig& rc) {
    std::filesystem::create_directories(rc.out_dir);
    const std::string pgm = rc.out_dir + "/pixels.pgm";
    write_pixel_image(r, pgm);
    std::cout << "wrote " << pgm << '\n';
    if (r.mode != Mode::pa) {
        const std::string jsonl = rc.out_dir + "/solutions.jsonl";
        write_solutions(r, jsonl);
        std::cout << "wrote " << jsonl << '\n';
    }
    const std::string summary = rc.out_dir + "/summary.json";
    write_summary(summarize(r, rc), summary);
    std::cout << "wrote " << summary << '\n';
}

} // namespace detail

inline int run(const std::vector<std::string>& args) {
    CLI::App app{"pixel-array steady-state solver"};
    app.require_subcommand(1);

    detail::Options o;
    CLI::App* solve_cmd = app.add_subcommand("solve", "run the solver and write outputs");
    CLI::App* oracle_cmd =
        app.add_subcommand("oracle", "run the brute-force oracle and write outputs");
    CLI::App* check_cmd =
        app.add_subcommand("check", "run solver and oracle, compare exactly");
    detail::add_common(solve_cmd, o);
    detail::add_common(oracle_cmd, o);
    detail::add_common(check_cmd, o);

    std::vector<const char*> argv;
    argv.push_back("pixelsolve");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    RunConfig rc;
    try {
        rc = load_config(o.config);
        detail::apply_overrides(rc, o);
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }

    try {
        if (app.got_subcommand(solve_cmd)) {
            const auto t0 = std::chrono::steady_clock::now();
            const PixelResult r = solve(rc.problem, o.threads);
            const auto t1 = std::chrono::steady_clock::now();
            detail::write_outputs(r, rc);
            std::cout << "wall time: "
                      << std::chrono::duration<double, std::milli>(t1 - t0).count() << " ms\n";
            return 0;
        }
        if (app.got_subcommand(oracle_cmd)) {
            const auto t0 = std::chrono::steady_clock::now();
            const PixelResult r = brute_force_solve(rc.problem);
            const auto t1 = std::chrono::steady_clock::now();
            detail::write_outputs(r, rc);
            std::cout << "wall time: "
                      << std::chrono::duration<double, std::milli>(t1 - t0).count() << " ms\n";
            return 0;
        }
        // check
        const PixelResult got = solve(rc.problem, o.threads);
        const PixelResult want = brute_force_solve(rc.problem);
        if (auto mismatch = diff_results(got, want)) {
            std::cerr << "check mismatch: " << *mismatch << '\n';
            return 3;
        }
        std::cout << "check passed: sweep matches brute force\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return 2;
    }
}

} // namespace pass::cli
