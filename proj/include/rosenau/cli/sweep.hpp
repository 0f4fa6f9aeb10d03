#pragma once

// Parallel evaluation of metric and check sweeps over (kernel, eps, t).

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "rosenau/cli/config.hpp"
#include "rosenau/cli/output.hpp"
#include "rosenau/rosenau.hpp"

namespace rosenau::cli {

struct SweepPoint {
    std::string kernel;
    double epsilon = 0.0;
    double t = 0.0;
};

/// Failure at one sweep point; keeps the original error category.
struct PointError {
    SweepPoint point;
    std::string message;
    bool numerical = true;
};

class SweepFailure : public std::runtime_error {
public:
    explicit SweepFailure(PointError e)
        : std::runtime_error("sweep point (kernel=" + e.point.kernel + ", eps=" + format_real(e.point.epsilon) +
                             ", t=" + format_real(e.point.t) + "): " + e.message),
          error_(std::move(e)) {}
    const PointError& error() const { return error_; }

private:
    PointError error_;
};

inline unsigned resolve_threads(int requested) {
    if (requested > 0)
        return static_cast<unsigned>(requested);
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

/// Runs job(i) for i < n on a pool of workers. Results are written by index
/// so the output order never depends on scheduling. The error of the
/// smallest failing index is rethrown.
template <class Job>
void parallel_for(std::size_t n, unsigned threads, Job&& job) {
    std::atomic<std::size_t> next{0};
    std::mutex mutex;
    std::size_t first_bad = n;
    std::exception_ptr error;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n)
                return;
            try {
                job(i);
            } catch (...) {
                std::lock_guard lock(mutex);
                if (i < first_bad) {
                    first_bad = i;
                    error = std::current_exception();
                }
            }
        }
    };
    const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < count; ++w)
        pool.emplace_back(worker);
    worker();
    for (auto& th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
}

inline std::vector<SweepPoint> sweep_points(const ExperimentConfig& c) {
    std::vector<SweepPoint> pts;
    for (const auto& k : c.kernels)
        for (double e : c.epsilons)
            for (double t : c.times)
                pts.push_back({k, e, t});
    return pts;
}

/// Everything shared by the points of one run.
struct SweepContext {
    ExperimentConfig config;
    GridSpec grid;
    SpectralField g0;
    bool g0_is_dirac = false;

    explicit SweepContext(ExperimentConfig c)
        : config(std::move(c)), grid(config.grid()), g0(make_initial(config.initial, grid, config.sigma)),
          g0_is_dirac(config.initial == "dirac") {}

    BackgroundKernel kernel(const SweepPoint& p) const {
        return kernel_from_name(p.kernel, p.epsilon, config.sigma, config.lambda);
    }
};

namespace detail {

template <class F>
auto at_point(const SweepPoint& p, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const std::invalid_argument& e) {
        throw SweepFailure({p, e.what(), false});
    } catch (const SweepFailure&) {
        throw;
    } catch (const std::exception& e) {
        throw SweepFailure({p, e.what(), true});
    }
}

struct PointState {
    const SweepContext& ctx;
    const SweepPoint& p;
    BackgroundKernel kernel;
    double sigma_sq;

    PointState(const SweepContext& c, const SweepPoint& pt)
        : ctx(c), p(pt), kernel(c.kernel(pt)), sigma_sq(kernel.diffusion()) {}

    SpectralField solution() const { return rosenau_propagate(ctx.g0, kernel, p.t); }
    SpectralField heat() const { return heat_propagate(ctx.g0, sigma_sq, p.t); }
    SpectralField omega() const { return gaussian_reference(ctx.grid, sigma_sq); }

    /// Physical-space solution: inverted density for density data, metadata otherwise.
    MixedDistribution solution_density() const {
        if (ctx.g0_is_dirac)
            throw UndefinedFunctional("the solution from a Dirac datum has atoms; use a density preset");
        return inverse_transform(solution());
    }
};

} // namespace detail

inline ResultRow make_row(const SweepContext& ctx, const SweepPoint& p, const std::string& q, double value,
                          double argsup = 0.0) {
    return {p.kernel, p.epsilon, p.t, q, value, argsup, ctx.grid.length(), ctx.grid.points()};
}

/// One row per requested metric at point p.
inline std::vector<ResultRow> evaluate_metrics(const SweepContext& ctx, const SweepPoint& p,
                                               const std::vector<std::string>& metrics) {
    return detail::at_point(p, [&] {
        detail::PointState st(ctx, p);
        std::vector<ResultRow> rows;
        for (const auto& m : metrics) {
            auto ds_row = [&](const SpectralField& a, const SpectralField& b, double s) {
                const MetricReport r = ds_distance(a, b, s);
                if (r.infinite)
                    throw InfiniteDistance(m + " is infinite: moments differ below order " + format_real(s));
                rows.push_back(make_row(ctx, p, m, r.value, r.argsup));
            };
            if (m == "d2_selfsim")
                ds_row(rescale(st.solution(), p.t).field, st.omega(), 2.0);
            else if (m == "d2_approx")
                ds_row(rescale(st.solution(), p.t).field, rescale(st.heat(), p.t).field, 2.0);
            else if (m == "d2_heat")
                ds_row(rescale(st.heat(), p.t).field, st.omega(), 2.0);
            else if (m == "d3_selfsim")
                ds_row(rescale(st.solution(), p.t).field, st.omega(), 3.0);
            else if (m == "d3_approx")
                ds_row(rescale(st.solution(), p.t).field, rescale(st.heat(), p.t).field, 3.0);
            else if (m == "l1_reg") {
                const std::vector<double> ts{p.t};
                rows.push_back(make_row(ctx, p, m, l1_convergence_series(st.kernel, ctx.g0, ts).front().distance));
            } else if (m == "l1_heat") {
                const std::vector<double> ts{p.t};
                rows.push_back(make_row(ctx, p, m, heat_l1_series(ctx.g0, st.sigma_sq, ts).front().second));
            } else if (m == "mass" || m == "m2" || m == "m4") {
                const int k = m == "mass" ? 0 : (m == "m2" ? 2 : 4);
                double v;
                if (ctx.g0_is_dirac) {
                    const Moments& mm = st.solution().moments();
                    if (static_cast<std::size_t>(k) >= mm.size())
                        throw UnsupportedMoment(m + " is not tracked for kernel '" + p.kernel + "'");
                    v = mm[static_cast<std::size_t>(k)];
                } else {
                    v = moment(st.solution_density(), k);
                }
                rows.push_back(make_row(ctx, p, m, v));
            } else if (m == "entropy") {
                rows.push_back(make_row(ctx, p, m, convex_functional(st.solution_density(), functionals::entropy)));
            } else if (m == "atom_weight") {
                rows.push_back(make_row(ctx, p, m, std::exp(-collision_intensity(st.kernel, p.t))));
            } else {
                throw std::invalid_argument("unknown metric '" + m + "'");
            }
        }
        return rows;
    });
}

inline std::vector<CheckRecord> evaluate_checks(const SweepContext& ctx, const SweepPoint& p,
                                                const std::vector<std::string>& checks) {
    return detail::at_point(p, [&] {
        detail::PointState st(ctx, p);
        const std::vector<double> ts{p.t};
        std::vector<CheckRecord> out;
        for (const auto& name : checks) {
            std::vector<BoundCheck> res;
            if (name == "exact_decay")
                res = exact_decay_check(ctx.g0, 2.0, st.sigma_sq, ts);
            else if (name == "d2_bound")
                res = d2_bound_check(p.kernel, ctx.g0, p.epsilon, ts, ctx.config.sigma);
            else if (name == "d3_bound")
                res = d3_bound_check(st.kernel, ctx.g0, ts);
            else
                throw std::invalid_argument("unknown check '" + name + "'");
            for (const auto& b : res)
                out.push_back({name, b.lhs, b.rhs, b.margin, b.satisfied, p.kernel, p.epsilon, p.t,
                               ctx.config.initial});
        }
        return out;
    });
}

struct SweepResult {
    std::vector<ResultRow> rows;
    std::vector<CheckRecord> checks;
};

/// Metric rows grouped by quantity, then kernel, eps, t in config order;
/// check records in point order.
inline SweepResult run_sweep(const SweepContext& ctx, const std::vector<std::string>& metrics,
                             const std::vector<std::string>& checks, unsigned threads) {
    const auto pts = sweep_points(ctx.config);
    std::vector<std::vector<ResultRow>> rows(pts.size());
    std::vector<std::vector<CheckRecord>> recs(pts.size());
    parallel_for(pts.size(), threads, [&](std::size_t i) {
        rows[i] = evaluate_metrics(ctx, pts[i], metrics);
        recs[i] = evaluate_checks(ctx, pts[i], checks);
    });
    SweepResult out;
    for (const auto& m : metrics)
        for (const auto& r : rows)
            for (const auto& row : r)
                if (row.quantity == m)
                    out.rows.push_back(row);
    for (const auto& c : checks)
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (const auto& rec : recs[i])
                if (rec.name == c) {
                    out.rows.push_back(make_row(ctx, pts[i], c + ".lhs", rec.lhs));
                    out.rows.push_back(make_row(ctx, pts[i], c + ".rhs", rec.rhs));
                    out.checks.push_back(rec);
                }
    return out;
}

} // namespace rosenau::cli
