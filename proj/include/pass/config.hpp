#pragma once

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pass/pipeline.hpp"

namespace pass {

// A problem the user got wrong (bad file, bad key, bad value) as opposed to a
// failure while solving; the CLI maps this to exit code 1.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A fully loaded run: the validated problem plus output/bookkeeping fields.
struct RunConfig {
    Problem problem;
    std::string out_dir = "out";
    std::string equation_text;
    std::string method_text;
    std::string mode_text;
};

namespace detail {

struct RawValue {
    std::string text;
    std::size_t line = 0;
};

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// Strip a trailing # comment, respecting double-quoted strings.
inline std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        else if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

inline std::map<std::string, RawValue> parse_flat_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::map<std::string, RawValue> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string body = trim(strip_comment(line));
        if (body.empty()) continue;
        const std::size_t eq = body.find('=');
        if (eq == std::string::npos)
            throw config_error(path + ":" + std::to_string(lineno) +
                               ": expected 'key = value'");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty() || value.empty())
            throw config_error(path + ":" + std::to_string(lineno) +
                               ": expected 'key = value'");
        if (out.count(key))
            throw config_error(path + ":" + std::to_string(lineno) + ": duplicate key '" +
                               key + "'");
        out[key] = RawValue{value, lineno};
    }
    return out;
}

inline double to_number(const std::string& key, const std::string& text) {
    const char* s = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(s, &end);
    if (end == s || *end != '\0')
        throw config_error("key '" + key + "': expected a number, got '" + text + "'");
    return v;
}

inline long to_integer(const std::string& key, const std::string& text) {
    const double v = to_number(key, text);
    if (v != std::floor(v) || std::fabs(v) > 1e15)
        throw config_error("key '" + key + "': expected an integer, got '" + text + "'");
    return static_cast<long>(v);
}

inline bool to_bool(const std::string& key, const std::string& text) {
    if (text == "true") return true;
    if (text == "false") return false;
    throw config_error("key '" + key + "': expected true or false, got '" + text + "'");
}

// Bare word or double-quoted string.
inline std::string to_string_value(const std::string& key, const std::string& text) {
    if (!text.empty() && text.front() == '"') {
        if (text.size() < 2 || text.back() != '"')
            throw config_error("key '" + key + "': unterminated string");
        return text.substr(1, text.size() - 2);
    }
    if (text.find_first_of("[]\",") != std::string::npos)
        throw config_error("key '" + key + "': expected a word or quoted string");
    return text;
}

// "[a, b, c]" -> numbers.
inline std::vector<double> to_number_list(const std::string& key, const std::string& text) {
    if (text.size() < 2 || text.front() != '[' || text.back() != ']')
        throw config_error("key '" + key + "': expected a bracketed list");
    std::vector<double> out;
    std::string inner = text.substr(1, text.size() - 2);
    std::stringstream ss(inner);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty())
            throw config_error("key '" + key + "': empty list element");
        out.push_back(to_number(key, item));
    }
    if (out.empty()) throw config_error("key '" + key + "': empty list");
    return out;
}

// "[[a, b], [c, d]]" -> pairs.
inline std::vector<std::pair<double, double>> to_pair_list(const std::string& key,
                                                           const std::string& text) {
    std::string t = trim(text);
    if (t.size() < 2 || t.front() != '[' || t.back() != ']')
        throw config_error("key '" + key + "': expected a list of [left, right] pairs");
    t = trim(t.substr(1, t.size() - 2));
    std::vector<std::pair<double, double>> out;
    std::size_t i = 0;
    while (i < t.size()) {
        while (i < t.size() && (std::isspace(static_cast<unsigned char>(t[i])) || t[i] == ','))
            ++i;
        if (i >= t.size()) break;
        if (t[i] != '[')
            throw config_error("key '" + key + "': expected '[' starting a pair");
        const std::size_t close = t.find(']', i);
        if (close == std::string::npos)
            throw config_error("key '" + key + "': unterminated pair");
        const auto nums = to_number_list(key, t.substr(i, close - i + 1));
        if (nums.size() != 2)
            throw config_error("key '" + key + "': each pair needs exactly two values");
        out.emplace_back(nums[0], nums[1]);
        i = close + 1;
    }
    if (out.empty()) throw config_error("key '" + key + "': empty list");
    return out;
}

} // namespace detail

inline RunConfig load_config(const std::string& path) {
    auto raw = detail::parse_flat_file(path);

    static const std::set<std::string> known = {
        "equation", "mu", "h", "D", "f", "reaction", "range", "bin_size", "cells",
        "method", "mode", "max_solutions_per_pixel", "boundaries", "hidden_equations",
        "out_dir", "arity", "epsilon", "residual_offset"};
    for (const auto& [key, val] : raw)
        if (!known.count(key))
            throw config_error(path + ":" + std::to_string(val.line) + ": unknown key '" +
                               key + "'");

    auto has = [&](const std::string& k) { return raw.count(k) != 0; };
    auto get = [&](const std::string& k) -> const std::string& { return raw.at(k).text; };
    auto require = [&](const std::string& k) -> const std::string& {
        if (!has(k)) throw config_error("missing required key '" + k + "'");
        return get(k);
    };

    RunConfig rc;
    Problem& p = rc.problem;

    rc.equation_text = detail::to_string_value("equation", require("equation"));
    if (rc.equation_text.empty()) throw config_error("key 'equation': empty value");

    const auto range = detail::to_number_list("range", require("range"));
    if (range.size() != 2) throw config_error("key 'range': expected [lo, hi]");
    const double bin_size = detail::to_number("bin_size", require("bin_size"));
    try {
        p.binning = make_binning(range[0], range[1], bin_size);
    } catch (const std::invalid_argument& e) {
        throw config_error(std::string("keys 'range'/'bin_size': ") + e.what());
    }

    const long cells = detail::to_integer("cells", require("cells"));
    if (cells < 2) throw config_error("key 'cells': must be at least 2");
    p.n_visible = static_cast<int>(cells);

    rc.method_text = detail::to_string_value("method", require("method"));
    if (rc.method_text == "epsilon") p.feas.method = Method::epsilon;
    else if (rc.method_text == "binround") p.feas.method = Method::binround;
    else throw config_error("key 'method': expected epsilon or binround");

    rc.mode_text = has("mode") ? detail::to_string_value("mode", get("mode")) : "hybrid";
    if (rc.mode_text == "pa") p.mode = Mode::pa;
    else if (rc.mode_text == "pass") p.mode = Mode::pass;
    else if (rc.mode_text == "hybrid") p.mode = Mode::hybrid;
    else throw config_error("key 'mode': expected pa, pass, or hybrid");

    if (has("epsilon")) {
        const double eps = detail::to_number("epsilon", get("epsilon"));
        if (eps < 0.0) throw config_error("key 'epsilon': must be >= 0");
        p.feas.epsilon_override = eps;
    }
    if (has("residual_offset"))
        p.feas.residual_grid_offset = detail::to_number("residual_offset", get("residual_offset"));

    if (has("max_solutions_per_pixel")) {
        const long m = detail::to_integer("max_solutions_per_pixel", get("max_solutions_per_pixel"));
        if (m < 1) throw config_error("key 'max_solutions_per_pixel': must be positive");
        p.max_solutions_per_pixel = static_cast<std::size_t>(m);
    }

    if (has("hidden_equations"))
        p.hidden_equations = detail::to_bool("hidden_equations", get("hidden_equations"));

    if (has("out_dir")) rc.out_dir = detail::to_string_value("out_dir", get("out_dir"));

    // Stencil: builtin name or custom expression.
    static const std::set<std::string> builtins = {"heat", "fisher", "bbm", "sine_gordon",
                                                   "reaction_diffusion"};
    StencilParams sp;
    if (has("mu")) sp.mu = detail::to_number("mu", get("mu"));
    if (has("h")) sp.h = detail::to_number("h", get("h"));
    if (has("D")) sp.D = detail::to_number("D", get("D"));
    if (has("f")) sp.f = detail::to_number("f", get("f"));
    if (has("reaction")) sp.reaction = detail::to_string_value("reaction", get("reaction"));

    if (builtins.count(rc.equation_text)) {
        if (has("arity"))
            throw config_error("key 'arity': only valid for custom expression equations");
        if (has("reaction") && rc.equation_text != "reaction_diffusion")
            throw config_error("key 'reaction': only valid for equation = reaction_diffusion");
        try {
            p.stencil = builtin_stencil(rc.equation_text, sp);
        } catch (const std::invalid_argument& e) {
            throw config_error(std::string("key 'equation': ") + e.what());
        } catch (const parse_error& e) {
            throw config_error(std::string("key 'reaction': ") + e.what());
        }
    } else {
        if (has("reaction"))
            throw config_error("key 'reaction': only valid for equation = reaction_diffusion");
        if (!has("arity"))
            throw config_error("key 'arity': required when equation is a custom expression");
        const long arity = detail::to_integer("arity", get("arity"));
        if (arity != 2 && arity != 3) throw config_error("key 'arity': must be 2 or 3");
        try {
            p.stencil = parse_stencil(rc.equation_text, static_cast<int>(arity));
        } catch (const parse_error& e) {
            throw config_error(std::string("key 'equation': ") + e.what());
        } catch (const std::invalid_argument& e) {
            throw config_error(std::string("key 'equation': ") + e.what());
        }
    }
    p.equation_label = rc.equation_text;

    if (has("boundaries")) {
        p.boundaries = detail::to_pair_list("boundaries", get("boundaries"));
        try {
            detail::make_filter(p); // validate values are centers in range
        } catch (const std::invalid_argument& e) {
            throw config_error(std::string("key 'boundaries': ") + e.what());
        }
    }

    return rc;
}

} // namespace pass
