#pragma once

// Experiment configuration: flat "key = value" lines grouped under
// "[section]" headers. '#' and ';' start comments.
//
//   [kernel]   family = rosenau, central-diff | custom:<path>   sigma = 1   lambda = ...
//   [sweep]    epsilons = 0.5, 0.1     times = 1, 10 | log:1:100:12
//   [initial]  preset = bimodal | file:<path>
//   [grid]     L = 400   N = 4096
//   [output]   dir = out   metrics = ...   checks = ...   plots = ...
//   [rates]    window = 5:100
//   [appendix] s = 0.9   tmax = 1000   points = 16   delta = 0.1

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rosenau/grid.hpp"

namespace rosenau::cli {

/// Invalid configuration; carries the offending line (0 when not tied to one).
class ConfigError : public std::invalid_argument {
public:
    ConfigError(const std::string& source, std::size_t line, const std::string& what)
        : std::invalid_argument(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + what),
          line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

inline const std::vector<std::string>& registered_metrics() {
    static const std::vector<std::string> names{"d2_selfsim", "d2_approx", "d2_heat", "d3_selfsim", "d3_approx",
                                                "l1_reg",     "l1_heat",   "mass",    "m2",         "m4",
                                                "entropy",    "atom_weight"};
    return names;
}

inline const std::vector<std::string>& registered_checks() {
    static const std::vector<std::string> names{"exact_decay", "d2_bound", "d3_bound"};
    return names;
}

struct ExperimentConfig {
    std::string source = "<config>";
    std::vector<std::string> kernels{"rosenau"};
    double sigma = 1.0;
    std::optional<double> lambda;
    std::vector<double> epsilons;
    std::vector<double> times;
    std::string initial = "bimodal";
    std::optional<double> grid_length;
    std::optional<std::size_t> grid_points;
    std::string out_dir = "out";
    std::vector<std::string> metrics;
    std::vector<std::string> checks;
    std::vector<std::string> plots;
    std::pair<double, double> fit_window{5.0, 100.0};
    double appendix_s = 0.9;
    double appendix_tmax = 1000.0;
    int appendix_points = 16;
    double appendix_delta = 0.1;

    double t_max() const { return times.empty() ? 0.0 : *std::max_element(times.begin(), times.end()); }

    /// Grid shared by every sweep point: explicit [grid] values, otherwise
    /// L = 40 sigma sqrt(1 + t_max) and N from ROSENAU_GRID_N or 4096.
    GridSpec grid() const {
        const std::size_t n = grid_points ? *grid_points : default_grid_points();
        if (grid_length)
            return GridSpec(*grid_length, n);
        return default_grid(sigma, t_max(), n);
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(s);
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty())
            out.push_back(item);
    }
    return out;
}

inline std::optional<double> parse_double(const std::string& s) {
    double x = 0.0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    auto [p, ec] = std::from_chars(b, e, x);
    if (ec != std::errc() || p != e || !std::isfinite(x))
        return std::nullopt;
    return x;
}

struct Entry {
    std::string value;
    std::size_t line = 0;
};

} // namespace detail

/// "a, b, c" or "log:lo:hi:n" (n log-spaced values, endpoints included).
inline std::vector<double> parse_real_list(const std::string& text, const std::string& source, std::size_t line,
                                           const std::string& key) {
    std::vector<double> out;
    if (text.rfind("log:", 0) == 0) {
        const auto parts = detail::split(text.substr(4), ':');
        if (parts.size() != 3)
            throw ConfigError(source, line, key + ": expected log:lo:hi:n");
        const auto lo = detail::parse_double(parts[0]), hi = detail::parse_double(parts[1]);
        const auto n = detail::parse_double(parts[2]);
        if (!lo || !hi || !n || *lo <= 0.0 || *hi < *lo || *n < 1 || std::floor(*n) != *n)
            throw ConfigError(source, line, key + ": log:lo:hi:n needs 0 < lo <= hi and integer n >= 1");
        const int count = static_cast<int>(*n);
        for (int i = 0; i < count; ++i) {
            const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
            out.push_back(std::exp(std::log(*lo) + f * (std::log(*hi) - std::log(*lo))));
        }
        return out;
    }
    for (const auto& item : detail::split(text, ',')) {
        const auto x = detail::parse_double(item);
        if (!x)
            throw ConfigError(source, line, key + ": '" + item + "' is not a number");
        out.push_back(*x);
    }
    return out;
}

inline ExperimentConfig parse_config(std::istream& in, const std::string& source = "<config>") {
    std::map<std::string, detail::Entry> entries;
    std::string section;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (const auto pos = line.find_first_of("#;"); pos != std::string::npos)
            line.erase(pos);
        line = detail::trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3)
                throw ConfigError(source, line_no, "malformed section header '" + line + "'");
            section = detail::trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(source, line_no, "expected 'key = value', got '" + line + "'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(source, line_no, "empty key");
        if (section.empty())
            throw ConfigError(source, line_no, "key '" + key + "' appears before any [section]");
        const std::string full = section + "." + key;
        if (entries.count(full))
            throw ConfigError(source, line_no, "duplicate key '" + full + "'");
        entries[full] = {value, line_no};
    }

    static const std::vector<std::string> known{
        "kernel.family", "kernel.sigma",   "kernel.lambda", "sweep.epsilons", "sweep.times",
        "initial.preset", "grid.L",        "grid.N",        "output.dir",     "output.metrics",
        "output.checks",  "output.plots",  "rates.window",  "appendix.s",     "appendix.tmax",
        "appendix.points", "appendix.delta"};
    for (const auto& [key, e] : entries)
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError(source, e.line, "unknown key '" + key + "'");

    ExperimentConfig c;
    c.source = source;
    auto get = [&](const std::string& key) -> const detail::Entry* {
        auto it = entries.find(key);
        return it == entries.end() ? nullptr : &it->second;
    };
    auto real = [&](const detail::Entry& e, const std::string& key) {
        const auto x = detail::parse_double(e.value);
        if (!x)
            throw ConfigError(source, e.line, key + ": '" + e.value + "' is not a number");
        return *x;
    };
    auto names = [&](const detail::Entry& e, const std::vector<std::string>& allowed, const std::string& key) {
        auto list = detail::split(e.value, ',');
        for (const auto& n : list)
            if (std::find(allowed.begin(), allowed.end(), n) == allowed.end())
                throw ConfigError(source, e.line, key + ": unknown name '" + n + "'");
        return list;
    };

    if (auto e = get("kernel.family")) {
        c.kernels = detail::split(e->value, ',');
        if (c.kernels.empty())
            throw ConfigError(source, e->line, "kernel.family: empty list");
        for (const auto& k : c.kernels)
            if (k != "rosenau" && k != "central-diff" && k.rfind("custom:", 0) != 0)
                throw ConfigError(source, e->line, "kernel.family: unknown family '" + k + "'");
    }
    if (auto e = get("kernel.sigma")) {
        c.sigma = real(*e, "kernel.sigma");
        if (!(c.sigma > 0.0))
            throw ConfigError(source, e->line, "kernel.sigma must be positive");
    }
    if (auto e = get("kernel.lambda")) {
        c.lambda = real(*e, "kernel.lambda");
        if (!(*c.lambda > 0.0))
            throw ConfigError(source, e->line, "kernel.lambda must be positive");
    }
    if (auto e = get("sweep.epsilons")) {
        c.epsilons = parse_real_list(e->value, source, e->line, "sweep.epsilons");
        for (double x : c.epsilons)
            if (!(x > 0.0))
                throw ConfigError(source, e->line, "sweep.epsilons must be positive");
    }
    if (auto e = get("sweep.times")) {
        c.times = parse_real_list(e->value, source, e->line, "sweep.times");
        for (double x : c.times)
            if (!(x > 0.0))
                throw ConfigError(source, e->line, "sweep.times must be positive");
    }
    if (auto e = get("initial.preset"))
        c.initial = e->value;
    if (auto e = get("grid.L")) {
        c.grid_length = real(*e, "grid.L");
        if (!(*c.grid_length > 0.0))
            throw ConfigError(source, e->line, "grid.L must be positive");
    }
    if (auto e = get("grid.N")) {
        const double n = real(*e, "grid.N");
        if (n < 16 || std::floor(n) != n || !is_power_of_two(static_cast<std::size_t>(n)))
            throw ConfigError(source, e->line, "grid.N must be a power of two >= 16");
        c.grid_points = static_cast<std::size_t>(n);
    }
    if (auto e = get("output.dir"))
        c.out_dir = e->value;
    if (auto e = get("output.metrics"))
        c.metrics = names(*e, registered_metrics(), "output.metrics");
    if (auto e = get("output.checks"))
        c.checks = names(*e, registered_checks(), "output.checks");
    if (auto e = get("output.plots"))
        c.plots = detail::split(e->value, ',');
    if (auto e = get("rates.window")) {
        const auto parts = detail::split(e->value, ':');
        const auto lo = parts.size() == 2 ? detail::parse_double(parts[0]) : std::nullopt;
        const auto hi = parts.size() == 2 ? detail::parse_double(parts[1]) : std::nullopt;
        if (!lo || !hi || !(*lo < *hi))
            throw ConfigError(source, e->line, "rates.window: expected lo:hi with lo < hi");
        c.fit_window = {*lo, *hi};
    }
    if (auto e = get("appendix.s"))
        c.appendix_s = real(*e, "appendix.s");
    if (auto e = get("appendix.tmax"))
        c.appendix_tmax = real(*e, "appendix.tmax");
    if (auto e = get("appendix.points")) {
        const double n = real(*e, "appendix.points");
        if (n < 2 || std::floor(n) != n)
            throw ConfigError(source, e->line, "appendix.points must be an integer >= 2");
        c.appendix_points = static_cast<int>(n);
    }
    if (auto e = get("appendix.delta"))
        c.appendix_delta = real(*e, "appendix.delta");
    return c;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError(path, 0, "cannot open configuration file");
    return parse_config(in, path);
}

/// Checks that a sweep can run: nonempty lists and known plot names.
inline void validate_sweep(const ExperimentConfig& c) {
    if (c.epsilons.empty())
        throw ConfigError(c.source, 0, "[sweep] epsilons is required");
    if (c.times.empty())
        throw ConfigError(c.source, 0, "[sweep] times is required");
    for (const auto& p : c.plots) {
        const auto& m = registered_metrics();
        const auto& k = registered_checks();
        if (std::find(m.begin(), m.end(), p) == m.end() && std::find(k.begin(), k.end(), p) == k.end())
            throw ConfigError(c.source, 0, "output.plots: unknown quantity '" + p + "'");
    }
}

} // namespace rosenau::cli
