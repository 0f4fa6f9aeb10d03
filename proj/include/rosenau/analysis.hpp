#pragma once

// Self-similar rescaling, executable decay bounds, power-law fits and the
// Sobolev growth integral of the Rosenau fundamental solution.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "rosenau/errors.hpp"
#include "rosenau/fft.hpp"
#include "rosenau/kernels.hpp"
#include "rosenau/metrics.hpp"
#include "rosenau/spectral.hpp"

namespace rosenau {

/// V(t) = (1 + t)^{-1/2}.
inline double selfsimilar_scale(double t) { return 1.0 / std::sqrt(1.0 + t); }

namespace detail {

/// Trigonometric interpolant of the field, evaluated at arbitrary
/// frequencies: samples are mapped back to the velocity grid and
/// transformed directly.
inline std::vector<cplx> band_limited_resample(const SpectralField& f, std::span<const double> xis) {
    const GridSpec& g = f.grid();
    const std::size_t n = g.points();
    std::vector<cplx> phys(f.values().begin(), f.values().end());
    for (std::size_t k = 0; k < n; ++k)
        phys[k] *= alternating(k);
    fft::backward(phys);
    const double inv_l = 1.0 / g.length();
    for (std::size_t j = 0; j < n; ++j)
        phys[j] *= inv_l * alternating(j);
    std::vector<cplx> out(xis.size());
    for (std::size_t i = 0; i < xis.size(); ++i) {
        const double xi = xis[i];
        const cplx step = std::polar(1.0, -xi * g.dv());
        cplx phase, sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j % 64 == 0)
                phase = std::polar(1.0, -xi * g.v(j));
            sum += phys[j] * phase;
            phase *= step;
        }
        out[i] = g.dv() * sum;
    }
    return out;
}

} // namespace detail

/// h^(xi) = f^(a xi), the transform of a^{-1} f(v / a). Requires a <= 1 so
/// that every a xi_k lies inside the sampled band.
inline SpectralField dilate(const SpectralField& f, double a) {
    if (!(a > 0.0))
        throw std::invalid_argument("dilate: factor must be positive");
    if (a > 1.0)
        throw ResampleError("dilate: factor " + std::to_string(a) +
                            " maps grid frequencies outside the sampled band; enlarge the grid");
    const GridSpec& g = f.grid();
    Moments m = moments::dilate(f.moments(), a);
    if (a == 1.0)
        return f;
    if (f.has_exact()) {
        FourierFn fn = [base = f.exact(), a](double xi) { return base(a * xi); };
        return SpectralField::sample(g, std::move(fn), std::move(m));
    }
    std::vector<double> xis(g.points());
    for (std::size_t k = 0; k < xis.size(); ++k)
        xis[k] = a * g.xi(k);
    std::vector<cplx> values = detail::band_limited_resample(f, xis);
    values[g.zero_bin()] = f[g.zero_bin()];
    return SpectralField(g, std::move(values), std::move(m));
}

struct RescaledSolution {
    SpectralField base;
    double t = 0.0;
    double V = 1.0;
    /// h^(xi) = base^(V xi).
    SpectralField field;
};

inline RescaledSolution rescale(const SpectralField& f, double t) {
    require_nonnegative_time(t, "rescale");
    const double v = selfsimilar_scale(t);
    return {f, t, v, dilate(f, v)};
}

struct BoundCheck {
    std::string name;
    double t = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    bool satisfied = false;
    double margin = 0.0;
};

inline constexpr double kBoundSlack = 1e-12;

inline BoundCheck make_check(std::string name, double t, double lhs, double rhs) {
    return {std::move(name), t, lhs, rhs, lhs <= rhs + kBoundSlack, rhs - lhs};
}

inline double finite_distance(const SpectralField& a, const SpectralField& b, double s, std::string_view what) {
    const MetricReport r = ds_distance(a, b, s);
    if (r.infinite)
        throw InfiniteDistance(std::string(what) + ": d_" + std::to_string(s) +
                               " is infinite (moments of the two measures differ below order s)");
    return r.value;
}

/// d_s(h(t), omega_sigma) <= (1 + t)^{-s/2} d_s(g0, omega_sigma) for the heat flow.
inline std::vector<BoundCheck> exact_decay_check(const SpectralField& g0, double s, double sigma_sq,
                                                 std::span<const double> times) {
    const SpectralField omega = gaussian_reference(g0.grid(), sigma_sq);
    const double d0 = finite_distance(g0, omega, s, "exact_decay_check");
    std::vector<BoundCheck> out;
    for (double t : times) {
        const SpectralField h = rescale(heat_propagate(g0, sigma_sq, t), t).field;
        const double lhs = finite_distance(h, omega, s, "exact_decay_check");
        out.push_back(make_check("exact_decay", t, lhs, std::pow(1.0 + t, -0.5 * s) * d0));
    }
    return out;
}

/// Constant of the d_2 approximation bound: sqrt(3 sigma^2 / 2) for central
/// differences, sqrt(sigma^2 / 2) for the Rosenau kernel.
inline double d2_bound_constant(std::string_view family, double sigma) {
    if (family == "central-diff")
        return std::sqrt(1.5 * sigma * sigma);
    if (family == "rosenau")
        return std::sqrt(0.5 * sigma * sigma);
    throw std::invalid_argument("d2_bound_check: no bound for kernel family '" + std::string(family) + "'");
}

/// d_2(h_eps(t), omega) <= (1 + t)^{-1} d_2(g0, omega) + C eps sqrt(t) / (1 + t),
/// omega the Gaussian with sigma^2 = lambda gamma^2 / 2 of the kernel.
inline std::vector<BoundCheck> d2_bound_check(std::string_view family, const SpectralField& g0, double eps,
                                              std::span<const double> times, double sigma = 1.0) {
    const double c = d2_bound_constant(family, sigma);
    const BackgroundKernel kernel = kernel_from_name(family, eps, sigma);
    const SpectralField omega = gaussian_reference(g0.grid(), kernel.diffusion());
    const double d0 = finite_distance(g0, omega, 2.0, "d2_bound_check");
    std::vector<BoundCheck> out;
    for (double t : times) {
        const SpectralField h = rescale(rosenau_propagate(g0, kernel, t), t).field;
        const double lhs = finite_distance(h, omega, 2.0, "d2_bound_check");
        const double rhs = d0 / (1.0 + t) + c * eps * std::sqrt(t) / (1.0 + t);
        out.push_back(make_check("d2_bound", t, lhs, rhs));
    }
    return out;
}

/// 13 sqrt(2) / 24.
inline const double kD3BoundConstant = 13.0 * std::numbers::sqrt2 / 24.0;

/// d_3(h_eps(t), omega) <= (1 + t)^{-3/2} d_3(g0, omega)
///                         + 13 sqrt(2)/24 B_eps^{3/4} (sqrt(t) / (1 + t))^{3/2}.
inline std::vector<BoundCheck> d3_bound_check(const BackgroundKernel& kernel, const SpectralField& g0,
                                              std::span<const double> times) {
    const double b = b_epsilon(kernel);
    const SpectralField omega = gaussian_reference(g0.grid(), kernel.diffusion());
    const double d0 = finite_distance(g0, omega, 3.0, "d3_bound_check");
    std::vector<BoundCheck> out;
    for (double t : times) {
        const SpectralField h = rescale(rosenau_propagate(g0, kernel, t), t).field;
        const double lhs = finite_distance(h, omega, 3.0, "d3_bound_check");
        const double rhs = std::pow(1.0 + t, -1.5) * d0 +
                           kD3BoundConstant * std::pow(b, 0.75) * std::pow(std::sqrt(t) / (1.0 + t), 1.5);
        out.push_back(make_check("d3_bound", t, lhs, rhs));
    }
    return out;
}

struct RateFit {
    double exponent = 0.0;
    double prefactor = 0.0;
    double r_squared = 0.0;
    std::pair<double, double> window{0.0, 0.0};
    std::size_t points = 0;
};

inline constexpr std::pair<double, double> kDefaultFitWindow{5.0, 100.0};

/// Least squares of log(value) against log(1 + t) over t in [lo, hi]:
/// value ~ prefactor (1 + t)^exponent.
inline RateFit rate_fit(std::span<const std::pair<double, double>> series,
                        std::pair<double, double> window = kDefaultFitWindow) {
    std::vector<double> x, y;
    for (const auto& [t, v] : series) {
        if (t < window.first || t > window.second)
            continue;
        if (!(v > 0.0) || !std::isfinite(v))
            throw InvalidData("rate_fit: value " + std::to_string(v) + " at t = " + std::to_string(t) +
                              " is not positive");
        x.push_back(std::log1p(t));
        y.push_back(std::log(v));
    }
    if (x.size() < 5)
        throw InvalidData("rate_fit: need at least 5 points in the window, got " + std::to_string(x.size()));
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0))
        throw InvalidData("rate_fit: all points share one time");
    RateFit fit;
    fit.exponent = sxy / sxx;
    fit.prefactor = std::exp(my - fit.exponent * mx);
    fit.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
    fit.window = window;
    fit.points = x.size();
    return fit;
}

// Sobolev growth of the Rosenau fundamental solution (eps = sigma = 1).

/// exp(-t xi^2/(1+xi^2)) - exp(-t), evaluated without cancellation.
inline double appendix_bracket(double xi, double t) {
    const double q = 1.0 / (1.0 + xi * xi);
    return -std::exp(-t * (1.0 - q)) * std::expm1(-t * q);
}

inline constexpr double kAppendixLowerCut = 1e-10;
inline constexpr double kAppendixUpperCut = 1e8;
inline constexpr int kAppendixPanels = 400;

/// I_s(t) = int |xi|^{2s} bracket(xi, t)^2 dxi over the real line. Composite
/// 20-point Gauss-Legendre in u = log xi on [1e-10, 1e8], with the two ends
/// closed analytically:
///   xi < a: bracket ~ 1 - e^{-t}        -> a^{2s+1} (1 - e^{-t})^2 / (2s + 1)
///   xi > b: bracket ~ t e^{-t} / xi^2   -> b^{2s-3} t^2 e^{-2t} / (3 - 2s)
inline double appendix_integral(double s, double t, int panels = kAppendixPanels) {
    if (!(s > 0.0))
        throw std::invalid_argument("appendix_integral: s must be positive");
    if (s >= 1.0)
        throw DivergentIntegral("appendix_integral: s = " + std::to_string(s) + " is outside (0, 1)");
    require_nonnegative_time(t, "appendix_integral");
    if (panels < 1)
        throw std::invalid_argument("appendix_integral: need at least one panel");
    if (t == 0.0)
        return 0.0;
    using GL = boost::math::quadrature::gauss<double, 20>;
    const double ua = std::log(kAppendixLowerCut), ub = std::log(kAppendixUpperCut);
    const double h = (ub - ua) / panels;
    auto integrand = [s, t](double u) {
        const double xi = std::exp(u);
        const double b = appendix_bracket(xi, t);
        return std::exp((2.0 * s + 1.0) * u) * b * b;
    };
    double body = 0.0;
    for (int i = 0; i < panels; ++i)
        body += GL::integrate(integrand, ua + i * h, ua + (i + 1) * h);
    const double lower = std::pow(kAppendixLowerCut, 2.0 * s + 1.0) * std::pow(-std::expm1(-t), 2) / (2.0 * s + 1.0);
    const double upper = std::pow(kAppendixUpperCut, 2.0 * s - 3.0) * t * t * std::exp(-2.0 * t) / (3.0 - 2.0 * s);
    return 2.0 * (body + lower + upper);
}

inline void require_appendix_kernel(const BackgroundKernel& kernel) {
    if (kernel.family() != KernelFamily::rosenau || kernel.epsilon() != 1.0 || kernel.sigma() != 1.0)
        throw std::invalid_argument("appendix_bs: requires the Rosenau kernel with eps = sigma = 1");
}

/// B_s(t) = (1 + t)^{s + 1/2} I_s(t)^{1/2}.
inline double appendix_bs(const BackgroundKernel& kernel, double s, double t, int panels = kAppendixPanels) {
    require_appendix_kernel(kernel);
    return std::pow(1.0 + t, s + 0.5) * std::sqrt(appendix_integral(s, t, panels));
}

/// Sobolev seminorm of the self-similar profile of the regular part,
/// (int |xi|^{2s} |G1^(V xi, t)|^2 dxi)^{1/2}; substituting eta = V xi gives
/// (1 + t)^{(s + 1/2)/2} I_s(t)^{1/2}.
inline double appendix_bs_direct(const BackgroundKernel& kernel, double s, double t, int panels = kAppendixPanels) {
    require_appendix_kernel(kernel);
    return std::pow(1.0 + t, 0.5 * (s + 0.5)) * std::sqrt(appendix_integral(s, t, panels));
}

struct L1Point {
    double t = 0.0;
    /// ||g(t) - g_reg(t)||_1.
    double distance = 0.0;
    /// ||Omega_sigma(t) - P_reg(t)||_1, an upper bound for distance.
    double propagator_bound = 0.0;
    /// ||f||_1 / (||f||_2^{4/5} (int v^2 |f|)^{1/5}) for f = g - g_reg.
    double ladder_ratio = 0.0;
};

namespace detail {

inline std::vector<double> difference(const MixedDistribution& a, const MixedDistribution& b) {
    std::vector<double> d(a.density.size());
    for (std::size_t j = 0; j < d.size(); ++j)
        d[j] = a.density[j] - b.density[j];
    return d;
}

inline double l1(const GridSpec& g, const std::vector<double>& f) {
    double s = 0.0;
    for (double x : f)
        s += std::abs(x);
    return g.dv() * s;
}

} // namespace detail

/// Heat solution against the regularized Rosenau solution in L^1, both
/// inverted on the grid of g0; sigma^2 = lambda gamma^2 / 2 of the kernel.
inline std::vector<L1Point> l1_convergence_series(const BackgroundKernel& kernel, const SpectralField& g0,
                                                  std::span<const double> times) {
    if (kernel.family() != KernelFamily::rosenau)
        throw UnsupportedKernel("l1_convergence_series: kernel '" + kernel.name() +
                                "' is not the Rosenau kernel");
    const GridSpec& grid = g0.grid();
    const double sigma_sq = kernel.diffusion();
    std::vector<L1Point> out;
    for (double t : times) {
        const MixedDistribution g = inverse_transform(heat_propagate(g0, sigma_sq, t));
        const MixedDistribution greg = inverse_transform(regularized_solution(g0, kernel, t));
        const std::vector<double> f = detail::difference(g, greg);

        const MixedDistribution omega = inverse_transform(heat_kernel_field(grid, sigma_sq, t));
        const MixedDistribution preg = inverse_transform(regularized_propagator(kernel, grid, t));

        L1Point p;
        p.t = t;
        p.distance = detail::l1(grid, f);
        p.propagator_bound = detail::l1(grid, detail::difference(omega, preg));
        double l2 = 0.0, m2 = 0.0;
        for (std::size_t j = 0; j < f.size(); ++j) {
            l2 += f[j] * f[j];
            m2 += grid.v(j) * grid.v(j) * std::abs(f[j]);
        }
        l2 = std::sqrt(grid.dv() * l2);
        m2 *= grid.dv();
        p.ladder_ratio = (l2 > 0.0 && m2 > 0.0) ? p.distance / (std::pow(l2, 0.8) * std::pow(m2, 0.2)) : 0.0;
        out.push_back(p);
    }
    return out;
}

/// ||g(t) - Omega_sigma(t)||_1 for the heat flow from g0.
inline std::vector<std::pair<double, double>> heat_l1_series(const SpectralField& g0, double sigma_sq,
                                                             std::span<const double> times) {
    std::vector<std::pair<double, double>> out;
    for (double t : times) {
        if (!(t > 0.0))
            throw std::invalid_argument("heat_l1_series: times must be positive");
        const MixedDistribution g = inverse_transform(heat_propagate(g0, sigma_sq, t));
        const MixedDistribution omega = inverse_transform(heat_kernel_field(g0.grid(), sigma_sq, t));
        out.emplace_back(t, detail::l1(g0.grid(), detail::difference(g, omega)));
    }
    return out;
}

} // namespace rosenau
