#pragma once

// Fourier-based distances d_s, Lebesgue and homogeneous Sobolev norms,
// moments and convex functionals.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "rosenau/errors.hpp"
#include "rosenau/spectral.hpp"

namespace rosenau {

struct MetricReport {
    std::string name;
    double value = 0.0;
    /// Frequency (or location) where the supremum was attained.
    double argsup = 0.0;
    GridSpec grid;
    bool infinite = false;
};

namespace detail {

inline double factorial(int k) { return std::tgamma(static_cast<double>(k) + 1.0); }

/// Relative threshold below which two moments are treated as equal.
inline constexpr double kMomentMatchTolerance = 1e-10;

struct SmallXiLimit {
    bool known = false;
    double value = 0.0;
    bool infinite = false;
};

/// lim_{xi -> 0} |f1^ - f2^| / |xi|^s from the first mismatched moment k:
/// infinite if k < s, |d_k| / k! if k = s, zero if k > s.
inline SmallXiLimit small_xi_limit(const Moments& a, const Moments& b, double s) {
    SmallXiLimit out;
    if (a.empty() || b.empty())
        return out;
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t k = 0; k < n; ++k) {
        const double scale = std::max({1.0, std::abs(a[k]), std::abs(b[k])});
        const double diff = a[k] - b[k];
        if (std::abs(diff) <= kMomentMatchTolerance * scale)
            continue;
        out.known = true;
        const double kk = static_cast<double>(k);
        if (kk < s) {
            out.infinite = true;
            out.value = std::numeric_limits<double>::infinity();
        } else if (kk == s) {
            out.value = std::abs(diff) / factorial(static_cast<int>(k));
        } else {
            out.value = 0.0;
        }
        return out;
    }
    // All tracked moments agree: the difference is O(|xi|^n).
    if (static_cast<double>(n) >= s) {
        out.known = true;
        out.value = 0.0;
    }
    return out;
}

} // namespace detail

/// sup over xi != 0 of |f1^(xi) - f2^(xi)| / |xi|^s.
///
/// The grid part scans every nonzero bin. When both fields carry closed-form
/// transforms, the best bin is polished by a bracketed 1-D maximization.
/// The xi -> 0 limit is taken from the moment metadata; without moments a
/// growth test on the smallest bins decides divergence.
inline MetricReport ds_distance(const SpectralField& f1, const SpectralField& f2, double s) {
    if (!(s > 0.0))
        throw std::invalid_argument("ds_distance: s must be positive");
    if (!(f1.grid() == f2.grid()))
        throw std::invalid_argument("ds_distance: fields live on different grids");
    const GridSpec& g = f1.grid();
    MetricReport rep;
    rep.name = "d" + std::to_string(s);
    rep.grid = g;

    const std::size_t n = g.points();
    const std::size_t z = g.zero_bin();
    std::size_t best_k = n;
    double best = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (k == z)
            continue;
        const double xi = g.xi(k);
        const double r = std::abs(f1[k] - f2[k]) / std::pow(std::abs(xi), s);
        if (r > best) {
            best = r;
            best_k = k;
        }
    }
    if (best_k < n) {
        rep.value = best;
        rep.argsup = g.xi(best_k);
    }

    if (f1.has_exact() && f2.has_exact() && best_k < n) {
        const auto& e1 = f1.exact();
        const auto& e2 = f2.exact();
        const double xi0 = g.xi(best_k);
        const double sign = xi0 < 0.0 ? -1.0 : 1.0;
        double lo = std::abs(xi0) - g.dxi();
        double hi = std::abs(xi0) + g.dxi();
        lo = std::max(lo, 0.5 * g.dxi());
        auto neg_ratio = [&](double a) {
            const double xi = sign * a;
            return -std::abs(e1(xi) - e2(xi)) / std::pow(a, s);
        };
        const auto [arg, val] = boost::math::tools::brent_find_minima(neg_ratio, lo, hi, 52);
        if (-val > rep.value) {
            rep.value = -val;
            rep.argsup = sign * arg;
        }
    }

    const auto lim = detail::small_xi_limit(f1.moments(), f2.moments(), s);
    if (lim.known) {
        if (lim.infinite) {
            rep.value = std::numeric_limits<double>::infinity();
            rep.argsup = 0.0;
            rep.infinite = true;
        } else if (lim.value > rep.value) {
            rep.value = lim.value;
            rep.argsup = 0.0;
        }
        return rep;
    }

    // No moment information: compare the ratio on the innermost bins.
    auto ratio_at = [&](std::size_t m) {
        const std::size_t k = z + m;
        return std::abs(f1[k] - f2[k]) / std::pow(std::abs(g.xi(k)), s);
    };
    const double r1 = ratio_at(1), r2 = ratio_at(2), r4 = ratio_at(4);
    if (r1 > 1.5 * r2 && r2 > 1.5 * r4 && r1 > 1e-8) {
        rep.value = std::numeric_limits<double>::infinity();
        rep.argsup = 0.0;
        rep.infinite = true;
    }
    return rep;
}

/// d_s(f1 * f3, f2 * f3) <= d_s(f1, f2) up to 1e-12 slack.
inline bool convolution_contractivity_check(const SpectralField& f1, const SpectralField& f2,
                                            const SpectralField& f3, double s) {
    const double rhs = ds_distance(f1, f2, s).value;
    const double lhs = ds_distance(multiply(f1, f3), multiply(f2, f3), s).value;
    if (std::isinf(rhs))
        return true;
    return lhs <= rhs + 1e-12;
}

/// L^1 (density quadrature plus |atom weights|) or L^2 (density only).
inline double lp_norm(const MixedDistribution& d, int p) {
    if (p != 1 && p != 2)
        throw std::invalid_argument("lp_norm: p must be 1 or 2");
    double s = 0.0;
    for (double x : d.density)
        s += p == 1 ? std::abs(x) : x * x;
    s *= d.grid.dv();
    if (p == 1) {
        for (const Atom& a : d.atoms)
            s += std::abs(a.weight);
        return s;
    }
    if (!d.atoms.empty())
        throw UndefinedNorm("lp_norm: the L2 norm of a measure with atoms is undefined");
    return std::sqrt(s);
}

/// Integrand exponents at or below this are treated as non-integrable.
inline constexpr double kTailExponentFloor = 1.05;

/// (int |xi|^{2s} |f^(xi)|^2 dxi)^{1/2}. With this normalization
/// sobolev_norm(f, 0) = sqrt(2 pi) ||f||_2.
///
/// A non-negligible integrand at the edge of the band must decay like
/// |xi|^{-p} with p > kTailExponentFloor; its analytic tail is then added.
inline double sobolev_norm(const SpectralField& f, double s) {
    if (!(s >= 0.0))
        throw std::invalid_argument("sobolev_norm: s must be nonnegative");
    const GridSpec& g = f.grid();
    const std::size_t n = g.points();
    std::vector<double> w(n, 0.0);
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double xi = std::abs(g.xi(k));
        const double a = std::norm(f[k]);
        w[k] = (xi == 0.0) ? (s == 0.0 ? a : 0.0) : std::pow(xi, 2.0 * s) * a;
        total += w[k];
    }
    total *= g.dxi();
    if (total == 0.0)
        return 0.0;

    // Outer quarter of the band on each side.
    double outer = 0.0;
    for (std::size_t k = 0; k < n / 8; ++k)
        outer += w[k] + w[n - 1 - k];
    outer *= g.dxi();
    if (outer <= 1e-8 * total)
        return std::sqrt(total);

    // Decay exponent from the last octave of the positive half band.
    const std::size_t k_hi = n - 1;
    const std::size_t k_lo = g.zero_bin() + (n / 2) / 2;
    const double x_hi = g.xi(k_hi), x_lo = g.xi(k_lo);
    const double w_hi = 0.5 * (w[k_hi] + w[n - k_hi]);
    const double w_lo = 0.5 * (w[k_lo] + w[n - k_lo]);
    if (!(w_hi > 0.0) || !(w_lo > 0.0))
        throw TailDominated("sobolev_norm: integrand does not decay on the grid");
    const double p = -std::log(w_hi / w_lo) / std::log(x_hi / x_lo);
    if (!(p > kTailExponentFloor))
        throw TailDominated("sobolev_norm: |xi|^" + std::to_string(2.0 * s) +
                            " |f^|^2 decays like |xi|^-" + std::to_string(p) + ", not integrable");
    const double tail = 2.0 * w_hi * x_hi / (p - 1.0);
    return std::sqrt(total + tail);
}

/// Signed (v^k) or absolute (|v|^k) moment of a mixed distribution.
inline double moment(const MixedDistribution& d, int k, bool signed_power = true) {
    return raw_moment(d, k, signed_power);
}

/// int Phi(g(v)) dv over the grid; atoms make the functional undefined.
inline double convex_functional(const MixedDistribution& d, const std::function<double(double)>& phi) {
    if (!d.atoms.empty())
        throw UndefinedFunctional("convex_functional: distribution has atoms");
    double s = 0.0;
    for (double x : d.density)
        s += phi(x);
    return d.grid.dv() * s;
}

namespace functionals {

inline double square(double r) { return r * r; }
inline double fourth(double r) { return r * r * r * r; }
/// r log r, extended by 0 on r <= 0 (numerical ringing of a nonnegative density).
inline double entropy(double r) { return r > 0.0 ? r * std::log(r) : 0.0; }

} // namespace functionals

} // namespace rosenau
