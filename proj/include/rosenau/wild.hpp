#pragma once

// Wild sum representation g_eps = exp(-mu) sum_n mu^n / n! M_eps^{*n} * g0,
// mu = lambda t / eps^2, with certified Poisson truncation.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "rosenau/errors.hpp"
#include "rosenau/kernels.hpp"
#include "rosenau/spectral.hpp"

namespace rosenau {

struct WildTruncation {
    int terms = 0;
    double mu = 0.0;
    /// 1 - exp(-mu) sum_{n <= terms} mu^n / n!.
    double tail_mass = 0.0;
};

/// Poisson upper tail P(X > n) for X ~ Poisson(mu), accurate when tiny.
inline double poisson_tail(double mu, int n) {
    if (!(mu >= 0.0))
        throw std::invalid_argument("poisson_tail: mu must be nonnegative");
    if (n < 0)
        return 1.0;
    if (mu == 0.0)
        return 0.0;
    // P(X <= n) = Q(n+1, mu), so P(X > n) = P(n+1, mu).
    return boost::math::gamma_p(static_cast<double>(n) + 1.0, mu);
}

/// Smallest N with poisson_tail(mu, N) <= tol.
inline int truncation_order(double mu, double tol) {
    if (!(mu >= 0.0) || !std::isfinite(mu))
        throw std::invalid_argument("truncation_order: mu must be finite and nonnegative");
    if (!(tol > 0.0 && tol < 1.0))
        throw std::invalid_argument("truncation_order: tol must lie in (0, 1)");
    if (mu == 0.0)
        return 0;
    int hi = static_cast<int>(std::ceil(mu + 10.0 * std::sqrt(mu) + 40.0));
    while (poisson_tail(mu, hi) > tol)
        hi *= 2;
    int lo = -1; // tail(lo) > tol
    while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        if (poisson_tail(mu, mid) <= tol)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

inline WildTruncation make_truncation(double mu, int terms) {
    return {terms, mu, poisson_tail(mu, terms)};
}

/// exp(-mu) mu^n / n!.
inline double poisson_weight(double mu, int n) {
    if (mu == 0.0)
        return n == 0 ? 1.0 : 0.0;
    return boost::math::gamma_p_derivative(static_cast<double>(n) + 1.0, mu);
}

/// Above this intensity wild_partial_sum hands certified-length sums to the
/// spectral propagator.
inline constexpr double kWildDelegationThreshold = 5000.0;

struct WildSum {
    SpectralField field;
    WildTruncation truncation;
    /// True when the sum was replaced by the spectral propagator.
    bool delegated = false;
};

/// exp(-mu) sum_{n=0}^{N} mu^n / n! M^_eps^n g0^, with a running product for M^n.
inline WildSum wild_partial_sum(const SpectralField& g0, const BackgroundKernel& kernel, double t, int terms) {
    require_nonnegative_time(t, "wild_partial_sum");
    if (terms < 0)
        throw std::invalid_argument("wild_partial_sum: number of terms must be nonnegative");
    const double mu = collision_intensity(kernel, t);
    WildTruncation trunc = make_truncation(mu, terms);

    if (mu > kWildDelegationThreshold && terms >= truncation_order(mu, 1e-12))
        return {rosenau_propagate(g0, kernel, t), trunc, true};

    const GridSpec& g = g0.grid();
    const std::size_t n = g.points();
    std::vector<cplx> symbol(n), power(n, cplx(1.0)), acc(n, cplx(0.0));
    for (std::size_t k = 0; k < n; ++k)
        symbol[k] = kernel.symbol(g.xi(k));
    for (int m = 0; m <= terms; ++m) {
        const double w = poisson_weight(mu, m);
        for (std::size_t k = 0; k < n; ++k) {
            acc[k] += w * power[k];
            power[k] *= symbol[k];
        }
    }
    for (std::size_t k = 0; k < n; ++k)
        acc[k] *= g0[k];
    return {SpectralField(g, std::move(acc)), trunc, false};
}

/// Atoms of M_eps^{*n}: locations (-n + 2j) eps sigma with weights
/// 2^{-n} binom(n, j).
inline std::vector<Atom> cd_fundamental_atoms(const BackgroundKernel& kernel, int n) {
    if (kernel.family() != KernelFamily::central_difference)
        throw UnsupportedKernel("cd_fundamental_atoms: kernel '" + kernel.name() + "' is not the Bernoulli kernel");
    if (n < 0)
        throw std::invalid_argument("cd_fundamental_atoms: n must be nonnegative");
    const double h = kernel.atoms()[1].location;
    // Row n of Pascal's triangle divided by 2^n, built by halving sums (exact in binary).
    std::vector<double> row{1.0};
    for (int r = 1; r <= n; ++r) {
        std::vector<double> next(static_cast<std::size_t>(r) + 1, 0.0);
        for (int j = 0; j <= r; ++j) {
            const double left = j >= 1 ? row[static_cast<std::size_t>(j - 1)] : 0.0;
            const double right = j < r ? row[static_cast<std::size_t>(j)] : 0.0;
            next[static_cast<std::size_t>(j)] = 0.5 * (left + right);
        }
        row = std::move(next);
    }
    std::vector<Atom> atoms;
    atoms.reserve(row.size());
    for (int j = 0; j <= n; ++j)
        atoms.push_back({static_cast<double>(2 * j - n) * h, row[static_cast<std::size_t>(j)]});
    return atoms;
}

/// Atomic CD fundamental solution on the lattice eps sigma Z: Poisson mixture
/// of the binomial rows up to truncation_order(mu, tol). Atoms outside the
/// grid are dropped; dropping more than tol of mass is an error.
inline MixedDistribution cd_wild_solution(const BackgroundKernel& kernel, double t, double tol, const GridSpec& grid) {
    if (kernel.family() != KernelFamily::central_difference)
        throw UnsupportedKernel("cd_wild_solution: kernel '" + kernel.name() + "' is not the Bernoulli kernel");
    require_nonnegative_time(t, "cd_wild_solution");
    const double mu = collision_intensity(kernel, t);
    const int nmax = truncation_order(mu, tol);
    const double h = kernel.atoms()[1].location;

    // lattice[m + nmax] accumulates weight at location m h.
    std::vector<double> lattice(2 * static_cast<std::size_t>(nmax) + 1, 0.0);
    std::vector<double> row{1.0};
    for (int r = 0; r <= nmax; ++r) {
        if (r > 0) {
            std::vector<double> next(static_cast<std::size_t>(r) + 1, 0.0);
            for (int j = 0; j <= r; ++j) {
                const double left = j >= 1 ? row[static_cast<std::size_t>(j - 1)] : 0.0;
                const double right = j < r ? row[static_cast<std::size_t>(j)] : 0.0;
                next[static_cast<std::size_t>(j)] = 0.5 * (left + right);
            }
            row = std::move(next);
        }
        const double w = poisson_weight(mu, r);
        if (w == 0.0)
            continue;
        for (int j = 0; j <= r; ++j)
            lattice[static_cast<std::size_t>(2 * j - r + nmax)] += w * row[static_cast<std::size_t>(j)];
    }

    MixedDistribution out;
    out.grid = grid;
    double dropped = 0.0;
    for (int m = -nmax; m <= nmax; ++m) {
        double w = lattice[static_cast<std::size_t>(m + nmax)];
        // Symmetrize against rounding in the accumulation order.
        if (m != 0)
            w = 0.5 * (w + lattice[static_cast<std::size_t>(-m + nmax)]);
        if (w <= 0.0)
            continue;
        const double x = static_cast<double>(m) * h;
        if (!grid.contains(x) || (m > 0 && !grid.contains(-x))) {
            dropped += w;
            continue;
        }
        out.atoms.push_back({x, w});
    }
    if (dropped > tol)
        throw GridTooSmall("cd_wild_solution: " + std::to_string(dropped) +
                           " of mass lies outside the grid; enlarge L");
    return out;
}

} // namespace rosenau
