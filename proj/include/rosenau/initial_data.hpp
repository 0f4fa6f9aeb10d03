#pragma once

// Initial data presets: Gaussian mixtures with closed-form transforms and
// moments, the Dirac mass, and distributions read from file.

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rosenau/io.hpp"
#include "rosenau/spectral.hpp"

namespace rosenau {

struct GaussianComponent {
    double weight = 1.0;
    double mean = 0.0;
    double variance = 1.0;
};

inline Moments gaussian_mixture_moments(std::span<const GaussianComponent> parts) {
    Moments m(5, 0.0);
    for (const auto& c : parts) {
        const double a = c.mean, v = c.variance;
        m[0] += c.weight;
        m[1] += c.weight * a;
        m[2] += c.weight * (a * a + v);
        m[3] += c.weight * (a * a * a + 3.0 * a * v);
        m[4] += c.weight * (a * a * a * a + 6.0 * a * a * v + 3.0 * v * v);
    }
    return m;
}

inline SpectralField gaussian_mixture_field(const GridSpec& grid, std::vector<GaussianComponent> parts) {
    for (const auto& c : parts)
        if (!(c.variance > 0.0) || !(c.weight >= 0.0))
            throw std::invalid_argument("gaussian mixture: variances must be positive, weights nonnegative");
    Moments m = gaussian_mixture_moments(parts);
    FourierFn fn = [parts](double xi) {
        cplx s = 0.0;
        for (const auto& c : parts)
            s += c.weight * std::exp(-0.5 * c.variance * xi * xi) * std::polar(1.0, -xi * c.mean);
        return s;
    };
    return SpectralField::sample(grid, std::move(fn), std::move(m));
}

/// Fourth moment of the moment-matched preset (second moment 2 sigma^2).
inline constexpr double kMatchedFourthMoment = 10.0;

/// Symmetric mixture 1/2 N(-a, b^2) + 1/2 N(a, b^2) with m2 = 2 sigma^2 and
/// m4 = m4_target sigma^4. Since m4 = 12 sigma^4 - 2 a^4, a^4 = (12 - target) sigma^4 / 2.
inline std::vector<GaussianComponent> matched_mixture(double sigma, double m4_target = kMatchedFourthMoment) {
    if (!(m4_target < 12.0) || !(m4_target > 4.0))
        throw std::invalid_argument("matched_mixture: fourth moment target must lie in (4, 12) sigma^4");
    const double s2 = sigma * sigma;
    const double a2 = std::sqrt(0.5 * (12.0 - m4_target)) * s2;
    const double b2 = 2.0 * s2 - a2;
    const double a = std::sqrt(a2);
    return {{0.5, -a, b2}, {0.5, a, b2}};
}

inline const std::vector<std::string>& initial_presets() {
    static const std::vector<std::string> names{"gaussian", "bimodal", "matched4", "omega", "narrow", "dirac"};
    return names;
}

/// Builds the transform of an initial datum on `grid`:
///   gaussian  N(0, sigma^2)                         unit second moment when sigma = 1
///   bimodal   1/2 N(-0.8 sigma, 0.36 sigma^2) + 1/2 N(0.8 sigma, 0.36 sigma^2)
///   matched4  moment-matched mixture, m2 = 2 sigma^2, m4 = 10 sigma^4
///   omega     omega_sigma itself, variance 2 sigma^2
///   narrow    N(0, 0.01 sigma^2)
///   dirac     delta_0
///   file:<p>  a MixedDistribution text file
inline SpectralField make_initial(std::string_view preset, const GridSpec& grid, double sigma = 1.0) {
    const double s2 = sigma * sigma;
    if (preset == "gaussian")
        return gaussian_mixture_field(grid, {{1.0, 0.0, s2}});
    if (preset == "bimodal")
        return gaussian_mixture_field(grid, {{0.5, -0.8 * sigma, 0.36 * s2}, {0.5, 0.8 * sigma, 0.36 * s2}});
    if (preset == "matched4")
        return gaussian_mixture_field(grid, matched_mixture(sigma));
    if (preset == "omega")
        return gaussian_mixture_field(grid, {{1.0, 0.0, 2.0 * s2}});
    if (preset == "narrow")
        return gaussian_mixture_field(grid, {{1.0, 0.0, 0.01 * s2}});
    if (preset == "dirac")
        return dirac_field(grid);
    if (preset.starts_with("file:")) {
        MixedDistribution d = read_mixed_distribution(std::string(preset.substr(5)));
        if (!(d.grid == grid))
            d = regrid(d, grid);
        return forward_transform(d);
    }
    throw std::invalid_argument("unknown initial datum '" + std::string(preset) + "'");
}

} // namespace rosenau
