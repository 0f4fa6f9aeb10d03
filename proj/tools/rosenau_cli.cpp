// rosenau_cli: sweeps, bound checks, rate fits, appendix tables and plots.
//
// Exit codes: 0 ok, 1 numerical failure or violated bound, 2 usage/config error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rosenau/cli/config.hpp"
#include "rosenau/cli/output.hpp"
#include "rosenau/cli/sweep.hpp"
#include "rosenau/rosenau.hpp"

namespace fs = std::filesystem;
using namespace rosenau;
using namespace rosenau::cli;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitUsage = 2;

struct Globals {
    std::string config_flag;
    std::string config_positional;
    std::string out;
    int threads = 0;
    bool verbose = false;
};

void log(const Globals& g, const std::string& msg) {
    if (g.verbose)
        std::cerr << "[rosenau] " << msg << '\n';
}

ExperimentConfig load(const Globals& g, bool required = true) {
    std::string path = !g.config_flag.empty() ? g.config_flag : g.config_positional;
    ExperimentConfig c;
    if (path.empty()) {
        if (required)
            throw ConfigError("<command line>", 0, "a configuration file is required (--config <path>)");
    } else {
        c = load_config(path);
    }
    if (!g.out.empty())
        c.out_dir = g.out;
    return c;
}

fs::path prepare_out(const ExperimentConfig& c) {
    fs::path dir(c.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw ConfigError(c.source, 0, "output directory '" + c.out_dir + "' is not writable");
    return dir;
}

std::string safe_name(std::string s) {
    for (char& ch : s)
        if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '.' || ch == '_'))
            ch = '_';
    return s;
}

void write_plots(const fs::path& dir, const std::vector<std::string>& quantities, const std::vector<ResultRow>& rows,
                 const Globals& g) {
    for (const auto& q : quantities) {
        std::vector<ResultRow> sel;
        for (const auto& r : rows)
            if (r.quantity == q || r.quantity == q + ".lhs")
                sel.push_back(r.quantity == q ? r : ResultRow{r.kernel, r.epsilon, r.t, q, r.value, r.argsup,
                                                              r.grid_length, r.grid_points});
        const fs::path file = dir / (safe_name(q) + ".svg");
        std::ofstream out(file, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot write '" + file.string() + "'");
        out << render_svg(q, sel);
        log(g, "wrote " + file.string());
    }
}

int cmd_metrics(const Globals& g) {
    ExperimentConfig c = load(g);
    validate_sweep(c);
    if (c.metrics.empty())
        throw ConfigError(c.source, 0, "[output] metrics is empty");
    const fs::path dir = prepare_out(c);
    SweepContext ctx(c);
    log(g, "grid L=" + format_real(ctx.grid.length()) + " N=" + std::to_string(ctx.grid.points()));
    const SweepResult res = run_sweep(ctx, c.metrics, {}, resolve_threads(g.threads));
    write_csv((dir / "results.csv").string(), res.rows);
    write_plots(dir, c.plots, res.rows, g);
    log(g, "wrote " + std::to_string(res.rows.size()) + " rows");
    return kExitOk;
}

int cmd_check(const Globals& g) {
    ExperimentConfig c = load(g);
    validate_sweep(c);
    if (c.checks.empty())
        throw ConfigError(c.source, 0, "[output] checks is empty");
    const fs::path dir = prepare_out(c);
    SweepContext ctx(c);
    const SweepResult res = run_sweep(ctx, c.metrics, c.checks, resolve_threads(g.threads));
    write_csv((dir / "results.csv").string(), res.rows);
    write_checks_jsonl((dir / "checks.jsonl").string(), res.checks);
    write_plots(dir, c.plots, res.rows, g);
    std::size_t violated = 0;
    for (const auto& rec : res.checks) {
        if (!rec.satisfied) {
            ++violated;
            std::cerr << "violated: " << rec.name << " (kernel=" << rec.kernel << ", eps=" << format_real(rec.epsilon)
                      << ", t=" << format_real(rec.t) << ") lhs=" << format_real(rec.lhs)
                      << " rhs=" << format_real(rec.rhs) << '\n';
        }
    }
    std::cout << res.checks.size() - violated << "/" << res.checks.size() << " bound checks satisfied\n";
    return violated == 0 ? kExitOk : kExitNumerical;
}

int cmd_rates(const Globals& g) {
    ExperimentConfig c = load(g);
    validate_sweep(c);
    std::vector<std::string> metrics = c.metrics;
    if (metrics.empty())
        metrics = {"d2_approx", "d2_heat"};
    const fs::path dir = prepare_out(c);
    SweepContext ctx(c);
    const SweepResult res = run_sweep(ctx, metrics, {}, resolve_threads(g.threads));
    write_csv((dir / "results.csv").string(), res.rows);
    std::printf("%-14s %-10s %-12s %12s %14s %10s %6s\n", "kernel", "epsilon", "quantity", "exponent", "prefactor",
                "r_squared", "points");
    for (const auto& m : metrics)
        for (const auto& k : c.kernels)
            for (double e : c.epsilons) {
                std::vector<std::pair<double, double>> series;
                for (const auto& r : res.rows)
                    if (r.quantity == m && r.kernel == k && r.epsilon == e)
                        series.emplace_back(r.t, r.value);
                try {
                    const RateFit f = rate_fit(series, c.fit_window);
                    std::printf("%-14s %-10.6g %-12s %12.6f %14.6g %10.6f %6zu\n", k.c_str(), e, m.c_str(), f.exponent,
                                f.prefactor, f.r_squared, f.points);
                } catch (const InvalidData& err) {
                    std::printf("%-14s %-10.6g %-12s %12s  (%s)\n", k.c_str(), e, m.c_str(), "n/a", err.what());
                }
            }
    return kExitOk;
}

int cmd_simulate(const Globals& g) {
    ExperimentConfig c = load(g);
    validate_sweep(c);
    const fs::path dir = prepare_out(c);
    SweepContext ctx(c);
    const auto pts = sweep_points(c);
    std::vector<std::vector<ResultRow>> rows(pts.size());
    parallel_for(pts.size(), resolve_threads(g.threads), [&](std::size_t i) {
        const SweepPoint& p = pts[i];
        rows[i] = rosenau::cli::detail::at_point(p, [&] {
            const BackgroundKernel k = ctx.kernel(p);
            const double w = std::exp(-collision_intensity(k, p.t));
            MixedDistribution d;
            if (ctx.g0_is_dirac && k.family() == KernelFamily::central_difference) {
                d = cd_wild_solution(k, p.t, 1e-12, ctx.grid);
            } else if (ctx.g0_is_dirac) {
                const std::vector<Atom> atom{{0.0, w}};
                d = inverse_transform(rosenau_propagate(ctx.g0, k, p.t), atom);
            } else {
                d = inverse_transform(rosenau_propagate(ctx.g0, k, p.t));
            }
            const std::string name = "solution_" + safe_name(p.kernel) + "_eps" + format_real(p.epsilon) + "_t" +
                                     format_real(p.t) + ".txt";
            write_mixed_distribution((dir / name).string(), d);
            return std::vector<ResultRow>{make_row(ctx, p, "mass", d.mass()), make_row(ctx, p, "m2", moment(d, 2)),
                                          make_row(ctx, p, "atom_weight", w)};
        });
    });
    std::vector<ResultRow> all;
    for (const auto& r : rows)
        all.insert(all.end(), r.begin(), r.end());
    write_csv((dir / "results.csv").string(), all);
    log(g, "wrote " + std::to_string(pts.size()) + " distributions to " + dir.string());
    return kExitOk;
}

int cmd_appendix(const Globals& g, std::optional<double> s_flag, std::optional<double> tmax_flag,
                 std::optional<int> points_flag, std::optional<int> panels_flag) {
    ExperimentConfig c = load(g, false);
    const double s = s_flag.value_or(c.appendix_s);
    const double tmax = tmax_flag.value_or(c.appendix_tmax);
    const int points = points_flag.value_or(c.appendix_points);
    const int panels = panels_flag.value_or(kAppendixPanels);
    if (!(tmax > 0.0) || points < 2)
        throw ConfigError("<command line>", 0, "appendix needs tmax > 0 and points >= 2");
    const BackgroundKernel kernel = rosenau_kernel(1.0, 1.0);
    std::vector<double> ts{0.0};
    for (int i = 0; i < points; ++i)
        ts.push_back(std::pow(10.0, -1.0 + (std::log10(tmax) + 1.0) * i / (points - 1)));
    std::printf("# s = %.6g, delta = %.6g, panels = %d\n", s, c.appendix_delta, panels);
    std::printf("%14s %22s %22s %22s\n", "t", "B_s(t)", "B_s/(1+t)^delta", "profile_norm");
    std::vector<ResultRow> rows;
    for (double t : ts) {
        const double b = appendix_bs(kernel, s, t, panels);
        const double ratio = b / std::pow(1.0 + t, c.appendix_delta);
        const double direct = appendix_bs_direct(kernel, s, t, panels);
        std::printf("%14.6g %22.15g %22.15g %22.15g\n", t, b, ratio, direct);
        rows.push_back({"rosenau", 1.0, t, "appendix_bs", b, 0.0, 0.0, 0});
        rows.push_back({"rosenau", 1.0, t, "appendix_ratio", ratio, 0.0, 0.0, 0});
    }
    if (!g.out.empty() || !(g.config_flag.empty() && g.config_positional.empty())) {
        const fs::path dir = prepare_out(c);
        write_csv((dir / "results.csv").string(), rows);
    }
    return kExitOk;
}

int cmd_plot(const Globals& g, const std::string& csv_flag) {
    ExperimentConfig c = load(g, csv_flag.empty());
    const fs::path dir = prepare_out(c);
    const std::string csv = !csv_flag.empty() ? csv_flag : (dir / "results.csv").string();
    const std::vector<ResultRow> rows = read_csv(csv);
    std::vector<std::string> quantities = c.plots;
    if (quantities.empty()) {
        std::set<std::string> seen;
        for (const auto& r : rows)
            if (seen.insert(r.quantity).second)
                quantities.push_back(r.quantity);
    }
    write_plots(dir, quantities, rows, g);
    std::cout << "wrote " << quantities.size() << " plot(s) to " << dir.string() << '\n';
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rosenau-type kinetic approximations of the heat equation: sweeps, checks and plots"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--config", g.config_flag, "Experiment configuration file");
    app.add_option("--out", g.out, "Output directory (overrides [output] dir)");
    app.add_option("--threads", g.threads, "Worker threads, 0 = hardware concurrency")->check(CLI::NonNegativeNumber);
    app.add_flag("--verbose", g.verbose, "Progress messages on stderr");

    auto add_cmd = [&](const char* name, const char* help) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("config", g.config_positional, "Experiment configuration file");
        return sub;
    };
    CLI::App* simulate = add_cmd("simulate", "Solve and dump distributions");
    CLI::App* metrics = add_cmd("metrics", "Compute metric series into results.csv");
    CLI::App* check = add_cmd("check", "Run bound checks (exit 1 if any is violated)");
    CLI::App* rates = add_cmd("rates", "Fit power-law exponents of metric series");
    CLI::App* appendix = add_cmd("appendix", "Table of the Sobolev growth quantity B_s(t)");
    std::optional<double> s_flag, tmax_flag;
    std::optional<int> points_flag, panels_flag;
    appendix->add_option("--s", s_flag, "Sobolev order s in (0, 1)");
    appendix->add_option("--tmax", tmax_flag, "Largest time");
    appendix->add_option("--points", points_flag, "Number of log-spaced times");
    appendix->add_option("--panels", panels_flag, "Quadrature panels");
    CLI::App* plot = add_cmd("plot", "Render SVG plots from a results CSV");
    std::string csv_flag;
    plot->add_option("--csv", csv_flag, "CSV to plot (default <out>/results.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (simulate->parsed())
            return cmd_simulate(g);
        if (metrics->parsed())
            return cmd_metrics(g);
        if (check->parsed())
            return cmd_check(g);
        if (rates->parsed())
            return cmd_rates(g);
        if (appendix->parsed())
            return cmd_appendix(g, s_flag, tmax_flag, points_flag, panels_flag);
        if (plot->parsed())
            return cmd_plot(g, csv_flag);
    } catch (const SweepFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.error().numerical ? kExitNumerical : kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    }
    std::cerr << app.help();
    return kExitUsage;
}
