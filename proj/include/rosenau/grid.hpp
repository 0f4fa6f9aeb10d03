#pragma once

#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <string>

#include "rosenau/errors.hpp"

namespace rosenau {

/// Uniform periodic velocity grid on [-L/2, L/2) and its conjugate frequency
/// grid xi_k = dxi * (k - N/2), dxi = 2*pi/L.
class GridSpec {
public:
    GridSpec() = default;

    GridSpec(double length, std::size_t points) : length_(length), points_(points) {
        if (!(length > 0.0) || !std::isfinite(length))
            throw std::invalid_argument("GridSpec: length must be positive and finite");
        if (points < 16 || (points & (points - 1)) != 0)
            throw std::invalid_argument("GridSpec: points must be a power of two >= 16, got " +
                                        std::to_string(points));
    }

    double length() const { return length_; }
    std::size_t points() const { return points_; }
    double dv() const { return length_ / static_cast<double>(points_); }
    double dxi() const { return 2.0 * std::numbers::pi / length_; }
    double nyquist() const { return std::numbers::pi / dv(); }

    double v(std::size_t j) const { return -0.5 * length_ + static_cast<double>(j) * dv(); }
    double xi(std::size_t k) const {
        return dxi() * (static_cast<double>(k) - static_cast<double>(points_ / 2));
    }
    /// Index of the xi = 0 bin.
    std::size_t zero_bin() const { return points_ / 2; }

    bool contains(double v) const { return v >= -0.5 * length_ && v < 0.5 * length_; }

    friend bool operator==(const GridSpec& a, const GridSpec& b) {
        return a.length_ == b.length_ && a.points_ == b.points_;
    }

private:
    double length_ = 1.0;
    std::size_t points_ = 16;
};

inline constexpr std::size_t kDefaultGridPoints = 4096;

inline bool is_power_of_two(std::size_t n) { return n >= 1 && (n & (n - 1)) == 0; }

/// Default point count, overridable through ROSENAU_GRID_N (power of two).
inline std::size_t default_grid_points() {
    const char* env = std::getenv("ROSENAU_GRID_N");
    if (env == nullptr || *env == '\0')
        return kDefaultGridPoints;
    char* end = nullptr;
    const unsigned long long n = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || n < 16 || !is_power_of_two(static_cast<std::size_t>(n)))
        throw std::invalid_argument(std::string("ROSENAU_GRID_N must be a power of two >= 16, got '") +
                                    env + "'");
    return static_cast<std::size_t>(n);
}

/// L = 40 sigma sqrt(1 + t_max): Gaussian tails at L/2 are far below double precision.
inline GridSpec default_grid(double sigma, double t_max, std::size_t points = default_grid_points()) {
    if (!(sigma > 0.0) || !(t_max >= 0.0))
        throw std::invalid_argument("default_grid: need sigma > 0 and t_max >= 0");
    return GridSpec(40.0 * sigma * std::sqrt(1.0 + t_max), points);
}

/// Gaussian-tail estimate of the mass a distribution with the given mean and
/// variance places outside [-L/2, L/2).
inline double leaked_mass_estimate(const GridSpec& grid, double mean, double variance) {
    if (variance <= 0.0)
        return grid.contains(mean) ? 0.0 : 1.0;
    const double half = 0.5 * grid.length();
    const double scale = std::sqrt(2.0 * variance);
    return 0.5 * std::erfc((half - mean) / scale) + 0.5 * std::erfc((half + mean) / scale);
}

inline constexpr double kMaxLeakedMass = 1e-12;

/// Throws GridTooSmall when the periodic domain would truncate more than
/// kMaxLeakedMass of a distribution with the given mean and variance.
inline void check_truncation(const GridSpec& grid, double mean, double variance,
                             const std::string& context = {}) {
    const double leaked = leaked_mass_estimate(grid, mean, variance);
    if (!(leaked < kMaxLeakedMass)) {
        std::string msg = "grid too small: estimated mass outside |v| < " +
                          std::to_string(0.5 * grid.length()) + " is " + std::to_string(leaked);
        if (!context.empty())
            msg += " (" + context + ")";
        throw GridTooSmall(msg);
    }
}

} // namespace rosenau
