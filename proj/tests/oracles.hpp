#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's numerical routines.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

/// P(X > n), X ~ Poisson(mu), summing the upper tail terms directly in long
/// double until they are negligible.
inline double poisson_tail(double mu, int n) {
    long double term = std::exp(-static_cast<long double>(mu));
    for (int k = 1; k <= n + 1; ++k)
        term *= static_cast<long double>(mu) / k;
    long double sum = 0.0L;
    for (int k = n + 1; k < n + 2000; ++k) {
        sum += term;
        term *= static_cast<long double>(mu) / (k + 1);
        if (term < 1e-30L * sum)
            break;
    }
    return static_cast<double>(sum);
}

/// Composite Simpson rule with n (even) intervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i)
        s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return s * h / 3.0;
}

/// Absolute moment of the Laplace density exp(-|v|/b)/(2b) by Simpson on [0, 60b].
inline double laplace_moment(double b, int k) {
    auto f = [b, k](double v) { return std::pow(v, k) * std::exp(-v / b) / b; };
    return simpson(f, 0.0, 60.0 * b, 200000);
}

/// Gaussian with variance 2 sigma^2 (transform exp(-sigma^2 xi^2)).
inline double omega(double v, double sigma) {
    return std::exp(-v * v / (4.0 * sigma * sigma)) / std::sqrt(4.0 * std::numbers::pi * sigma * sigma);
}

inline double omega_l2_squared(double sigma) { return 1.0 / (2.0 * std::sqrt(2.0 * std::numbers::pi) * sigma); }

/// int omega log omega.
inline double omega_neg_entropy(double sigma) {
    return -0.5 * std::log(4.0 * std::numbers::pi * sigma * sigma * std::numbers::e);
}

/// sup over xi > 0 of |f(xi)| / xi^s estimated on a dense logarithmic grid
/// reaching down to xi_min, with the best node refined by golden-section
/// search and the small-xi end extrapolated by Richardson (error O(xi^2))
/// on the sequence xi_min, xi_min / 2.
inline double dense_sup(const std::function<double(double)>& diff, double s, double xi_min, double xi_max,
                        int points = 200000) {
    auto ratio = [&](double xi) { return std::abs(diff(xi)) / std::pow(xi, s); };
    double best = 0.0;
    int best_i = 0;
    const double la = std::log(xi_min), lb = std::log(xi_max);
    const double step = (lb - la) / points;
    for (int i = 0; i <= points; ++i) {
        const double r = ratio(std::exp(la + step * i));
        if (r > best) {
            best = r;
            best_i = i;
        }
    }
    double a = la + step * std::max(best_i - 1, 0), b = la + step * std::min(best_i + 1, points);
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 100; ++it) {
        const double c = b - phi * (b - a), d = a + phi * (b - a);
        if (ratio(std::exp(c)) > ratio(std::exp(d)))
            b = d;
        else
            a = c;
    }
    best = std::max(best, ratio(std::exp(0.5 * (a + b))));
    const double r1 = ratio(xi_min);
    const double r2 = ratio(0.5 * xi_min);
    return std::max(best, (4.0 * r2 - r1) / 3.0);
}

} // namespace oracle
