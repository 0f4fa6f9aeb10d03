#pragma once

// Background distributions M_eps of the linear kinetic (Rosenau-type)
// approximation to the heat equation, together with their Fourier symbols
// and the generator symbol A_eps(xi) = lambda (1 - M_eps^(xi)) / eps^2.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/math/interpolators/makima.hpp>

#include "rosenau/errors.hpp"
#include "rosenau/moments.hpp"
#include "rosenau/quadrature.hpp"

namespace rosenau {

struct Atom {
    double location = 0.0;
    double weight = 0.0;

    friend bool operator==(const Atom&, const Atom&) = default;
};

enum class KernelFamily { rosenau, central_difference, custom };

inline std::string to_string(KernelFamily f) {
    switch (f) {
    case KernelFamily::rosenau:
        return "rosenau";
    case KernelFamily::central_difference:
        return "central-diff";
    case KernelFamily::custom:
        return "custom";
    }
    return "unknown";
}

/// Marker for kernels whose moments of every order are finite.
inline constexpr int kAllMomentsFinite = std::numeric_limits<int>::max();

/// Even real symbol M^(xi) of an unscaled (eps = 1) kernel tabulated at
/// xi >= 0, interpolated by a modified-Akima cubic on the mirrored table and
/// held constant beyond the last node.
class TabulatedSymbol {
public:
    TabulatedSymbol(std::vector<double> xi, std::vector<double> value) {
        if (xi.size() < 5 || xi.size() != value.size())
            throw std::invalid_argument("TabulatedSymbol: need at least 5 (xi, value) rows");
        if (xi.front() != 0.0)
            throw std::invalid_argument("TabulatedSymbol: first row must be xi = 0");
        for (std::size_t i = 1; i < xi.size(); ++i)
            if (!(xi[i] > xi[i - 1]))
                throw std::invalid_argument("TabulatedSymbol: xi must be strictly increasing");
        nodes_ = xi;
        values_ = value;
        std::vector<double> x, y;
        x.reserve(2 * xi.size() - 1);
        y.reserve(2 * xi.size() - 1);
        for (std::size_t i = xi.size() - 1; i >= 1; --i) {
            x.push_back(-xi[i]);
            y.push_back(value[i]);
        }
        x.insert(x.end(), xi.begin(), xi.end());
        y.insert(y.end(), value.begin(), value.end());
        spline_ = std::make_shared<const Spline>(std::move(x), std::move(y));
        fit_origin();
    }

    /// Inside the first interval the even fit 1 - a xi^2 - b xi^4 replaces
    /// the spline, whose curvature at 0 is not that of the data.
    double operator()(double xi) const {
        const double a = std::abs(xi);
        if (a >= nodes_.back())
            return values_.back();
        if (a < nodes_[1]) {
            const double a2 = a * a;
            return values_.front() - a2 * (quad_ + a2 * quart_);
        }
        return (*spline_)(a);
    }

    double max_xi() const { return nodes_.back(); }

    /// Second moment -M''(0).
    double curvature_second_moment() const { return 2.0 * quad_; }

    double at_zero() const { return values_.front(); }

private:
    using Spline = boost::math::interpolators::makima<std::vector<double>>;

    /// Least squares of 1 - M = a xi^2 + b xi^4 on the first nodes.
    void fit_origin() {
        const std::size_t n = std::min<std::size_t>(nodes_.size(), 6);
        double s44 = 0, s46 = 0, s66 = 0, r4 = 0, r6 = 0;
        for (std::size_t i = 1; i < n; ++i) {
            const double x2 = nodes_[i] * nodes_[i];
            const double p2 = x2, p4 = x2 * x2;
            const double r = values_.front() - values_[i];
            s44 += p2 * p2;
            s46 += p2 * p4;
            s66 += p4 * p4;
            r4 += p2 * r;
            r6 += p4 * r;
        }
        const double det = s44 * s66 - s46 * s46;
        quad_ = (r4 * s66 - r6 * s46) / det;
        quart_ = (r6 * s44 - r4 * s46) / det;
    }

    std::vector<double> nodes_;
    std::vector<double> values_;
    std::shared_ptr<const Spline> spline_;
    double quad_ = 0.0;
    double quart_ = 0.0;
};

/// Reads a two-column text file "xi  M^(xi)"; '#' starts a comment.
inline TabulatedSymbol load_tabulated_symbol(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open custom kernel table '" + path + "'");
    std::vector<double> xi, value;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto pos = line.find('#'); pos != std::string::npos)
            line.erase(pos);
        std::istringstream ss(line);
        double a, b;
        if (!(ss >> a))
            continue;
        if (!(ss >> b))
            throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": expected two columns");
        xi.push_back(a);
        value.push_back(b);
    }
    return TabulatedSymbol(std::move(xi), std::move(value));
}

/// A background distribution M_eps. Immutable after construction; the
/// analytic symbol is the ground truth, atoms and density are auxiliary.
class BackgroundKernel {
public:
    using Symbol = std::function<std::complex<double>(double)>;
    using Density = std::function<double(double)>;

    struct Parts {
        KernelFamily family = KernelFamily::custom;
        double epsilon = 1.0;
        double lambda = 1.0;
        double gamma = 1.0;
        double sigma = 1.0;
        Symbol symbol;
        /// Optional 1 - M^(xi) without cancellation at small xi.
        Symbol deficit;
        std::vector<Atom> atoms;
        Density density;
        int max_moment = 2;
        /// Signed moments known in closed form or by construction; may be
        /// shorter than kTrackedMomentOrder + 1.
        Moments known_moments;
    };

    explicit BackgroundKernel(Parts p) : p_(std::move(p)) {
        if (!(p_.epsilon > 0.0) || !(p_.lambda > 0.0) || !(p_.gamma > 0.0))
            throw std::invalid_argument("BackgroundKernel: epsilon, lambda and gamma must be positive");
        if (!p_.symbol)
            throw std::invalid_argument("BackgroundKernel: symbol is required");
        if (p_.known_moments.empty())
            p_.known_moments = compute_tracked_moments();
        validate();
    }

    KernelFamily family() const { return p_.family; }
    std::string name() const { return to_string(p_.family); }
    double epsilon() const { return p_.epsilon; }
    double lambda() const { return p_.lambda; }
    double gamma() const { return p_.gamma; }
    /// Nominal sigma the kernel was built from.
    double sigma() const { return p_.sigma; }
    /// Diffusion coefficient lambda gamma^2 / 2 of the limiting heat equation.
    double diffusion() const { return 0.5 * p_.lambda * p_.gamma * p_.gamma; }
    /// Standard deviation eps * gamma of M_eps.
    double scale() const { return p_.epsilon * p_.gamma; }

    std::complex<double> symbol(double xi) const { return p_.symbol(xi); }
    const Symbol& symbol_function() const { return p_.symbol; }
    std::complex<double> deficit(double xi) const {
        return p_.deficit ? p_.deficit(xi) : 1.0 - p_.symbol(xi);
    }

    std::span<const Atom> atoms() const { return p_.atoms; }
    bool has_atoms() const { return !p_.atoms.empty(); }
    bool has_density() const { return static_cast<bool>(p_.density); }
    double density(double v) const { return p_.density ? p_.density(v) : 0.0; }
    int max_moment() const { return p_.max_moment; }

    /// Signed moments m_0..m_K, K = min(4, max_moment).
    const Moments& tracked_moments() const { return p_.known_moments; }

    /// Signed (v^k) or absolute (|v|^k) moment from atoms plus adaptive
    /// quadrature of the density on [-40 eps gamma, 40 eps gamma].
    double measure_moment(int k, bool absolute) const {
        if (k < 0)
            throw std::invalid_argument("moment order must be nonnegative");
        if (!has_atoms() && !has_density())
            throw UnsupportedMoment("kernel '" + name() + "' has no measure representation for m_" +
                                    std::to_string(k));
        auto power = [k, absolute](double v) {
            const double base = absolute ? std::abs(v) : v;
            return k == 0 ? 1.0 : std::pow(base, k);
        };
        double total = 0.0;
        for (const Atom& a : p_.atoms)
            total += a.weight * power(a.location);
        if (has_density()) {
            const double r = 40.0 * scale();
            auto f = [&](double v) { return power(v) * p_.density(v); };
            total += quadrature::integrate(f, -r, 0.0) + quadrature::integrate(f, 0.0, r);
        }
        return total;
    }

    /// Transform of the measure representation, sum w e^{-i xi v} + quadrature
    /// of the density; used to validate the analytic symbol.
    std::complex<double> measure_transform(double xi) const {
        std::complex<double> total = 0.0;
        for (const Atom& a : p_.atoms)
            total += a.weight * std::polar(1.0, -xi * a.location);
        if (has_density()) {
            const double r = 40.0 * scale();
            auto re = [&](double v) { return std::cos(xi * v) * p_.density(v); };
            auto im = [&](double v) { return -std::sin(xi * v) * p_.density(v); };
            const double re_part = quadrature::integrate(re, -r, 0.0, 1e-14) +
                                   quadrature::integrate(re, 0.0, r, 1e-14);
            const double im_part = quadrature::integrate(im, -r, 0.0, 1e-14) +
                                   quadrature::integrate(im, 0.0, r, 1e-14);
            total += std::complex<double>(re_part, im_part);
        }
        return total;
    }

private:
    Moments compute_tracked_moments() const {
        const int order = std::min(kTrackedMomentOrder, p_.max_moment);
        Moments m(static_cast<std::size_t>(order) + 1);
        for (int k = 0; k <= order; ++k)
            m[static_cast<std::size_t>(k)] = measure_moment(k, false);
        return m;
    }

    void validate() const {
        const std::string who = "kernel '" + name() + "'";
        const bool tabulated = p_.family == KernelFamily::custom;
        const double mass_tol = tabulated ? 1e-8 : 1e-12;
        if (std::abs(symbol(0.0) - 1.0) > mass_tol)
            throw std::invalid_argument(who + ": symbol(0) must be 1");
        const double s = scale();
        for (int i = -1000; i <= 1000; ++i) {
            const double xi = 0.05 * i / s;
            if (std::abs(symbol(xi)) > 1.0 + 1e-12)
                throw std::invalid_argument(who + ": |symbol| exceeds 1 at xi = " + std::to_string(xi));
        }
        // First moment from the odd part of the symbol, second from its curvature.
        const double h1 = 1e-4 / s;
        const double m1 = -((symbol(h1) - symbol(-h1)) / (2.0 * h1)).imag();
        if (std::abs(m1) > 1e-6 * s)
            throw std::invalid_argument(who + ": first moment must vanish");
        const double h2 = 1e-3 / s;
        const double curvature = -((symbol(h2) - 2.0 * symbol(0.0) + symbol(-h2)) / (h2 * h2)).real();
        const double expected = s * s;
        const double curvature_tol = tabulated ? 1e-2 : 1e-4;
        if (std::abs(curvature - expected) > curvature_tol * expected)
            throw std::invalid_argument(who + ": symbol curvature " + std::to_string(curvature) +
                                        " does not match eps^2 gamma^2 = " + std::to_string(expected));
        if (has_atoms() || has_density()) {
            double atom_mass = 0.0;
            for (const Atom& a : p_.atoms) {
                if (!(a.weight >= 0.0))
                    throw std::invalid_argument(who + ": negative atom weight");
                atom_mass += a.weight;
            }
            const double total = measure_moment(0, false);
            if (std::abs(total - 1.0) > 1e-10)
                throw std::invalid_argument(who + ": atoms and density must carry unit mass, got " +
                                            std::to_string(total) + " (atoms " + std::to_string(atom_mass) + ")");
            const double m2 = measure_moment(2, false);
            if (std::abs(m2 - expected) > 1e-8 * expected)
                throw std::invalid_argument(who + ": second moment " + std::to_string(m2) +
                                            " differs from eps^2 gamma^2");
        }
    }

    Parts p_;
};

/// Laplace background M_eps(v) = exp(-|v|/(eps sigma)) / (2 eps sigma) with
/// lambda = sigma^2; its variance 2 (eps sigma)^2 fixes gamma = sqrt(2) sigma.
inline BackgroundKernel rosenau_kernel(double epsilon, double sigma) {
    if (!(epsilon > 0.0) || !(sigma > 0.0))
        throw std::invalid_argument("rosenau_kernel: epsilon and sigma must be positive");
    const double b = epsilon * sigma;
    BackgroundKernel::Parts p;
    p.family = KernelFamily::rosenau;
    p.epsilon = epsilon;
    p.sigma = sigma;
    p.lambda = sigma * sigma;
    p.gamma = std::sqrt(2.0) * sigma;
    p.symbol = [b](double xi) { return std::complex<double>(1.0 / (1.0 + b * b * xi * xi), 0.0); };
    p.deficit = [b](double xi) {
        const double x2 = b * b * xi * xi;
        return std::complex<double>(x2 / (1.0 + x2), 0.0);
    };
    p.density = [b](double v) { return std::exp(-std::abs(v) / b) / (2.0 * b); };
    p.max_moment = kAllMomentsFinite;
    return BackgroundKernel(std::move(p));
}

/// Balanced Bernoulli background (central differences): atoms of mass 1/2 at
/// +-eps sigma, lambda = 2, gamma = sigma, symbol cos(eps sigma xi).
inline BackgroundKernel bernoulli_kernel(double epsilon, double sigma) {
    if (!(epsilon > 0.0) || !(sigma > 0.0))
        throw std::invalid_argument("bernoulli_kernel: epsilon and sigma must be positive");
    const double h = epsilon * sigma;
    BackgroundKernel::Parts p;
    p.family = KernelFamily::central_difference;
    p.epsilon = epsilon;
    p.sigma = sigma;
    p.lambda = 2.0;
    p.gamma = sigma;
    p.symbol = [h](double xi) { return std::complex<double>(std::cos(h * xi), 0.0); };
    p.deficit = [h](double xi) {
        const double s = std::sin(0.5 * h * xi);
        return std::complex<double>(2.0 * s * s, 0.0);
    };
    p.atoms = {{-h, 0.5}, {h, 0.5}};
    p.max_moment = kAllMomentsFinite;
    return BackgroundKernel(std::move(p));
}

/// Kernel from a tabulated unscaled symbol: M_eps^(xi) = M^(eps xi). gamma is
/// read off the curvature of the table at 0; lambda defaults to 2 sigma^2 /
/// gamma^2 so that the limiting diffusion coefficient is sigma^2.
inline BackgroundKernel custom_kernel(double epsilon, const TabulatedSymbol& table, double sigma = 1.0,
                                      std::optional<double> lambda = std::nullopt) {
    if (!(epsilon > 0.0) || !(sigma > 0.0))
        throw std::invalid_argument("custom_kernel: epsilon and sigma must be positive");
    if (std::abs(table.at_zero() - 1.0) > 1e-8)
        throw std::invalid_argument("custom kernel: tabulated symbol must equal 1 at xi = 0");
    const double m2 = table.curvature_second_moment();
    if (!(m2 > 0.0) || !std::isfinite(m2))
        throw std::invalid_argument("custom kernel: tabulated symbol has no positive second moment");
    BackgroundKernel::Parts p;
    p.family = KernelFamily::custom;
    p.epsilon = epsilon;
    p.sigma = sigma;
    p.gamma = std::sqrt(m2);
    p.lambda = lambda.value_or(2.0 * sigma * sigma / m2);
    p.symbol = [table, epsilon](double xi) { return std::complex<double>(table(epsilon * xi), 0.0); };
    p.max_moment = 2;
    p.known_moments = {1.0, 0.0, epsilon * epsilon * m2};
    return BackgroundKernel(std::move(p));
}

/// "rosenau", "central-diff" or "custom:<path>".
inline BackgroundKernel kernel_from_name(std::string_view name, double epsilon, double sigma,
                                         std::optional<double> lambda = std::nullopt) {
    if (name == "rosenau")
        return rosenau_kernel(epsilon, sigma);
    if (name == "central-diff")
        return bernoulli_kernel(epsilon, sigma);
    if (name.starts_with("custom:"))
        return custom_kernel(epsilon, load_tabulated_symbol(std::string(name.substr(7))), sigma, lambda);
    throw std::invalid_argument("unknown kernel family '" + std::string(name) +
                                "' (expected rosenau, central-diff or custom:<path>)");
}

inline std::complex<double> generator_symbol(const BackgroundKernel& kernel, double xi) {
    const double e = kernel.epsilon();
    return kernel.lambda() * kernel.deficit(xi) / (e * e);
}

/// Absolute moment m_k = int |v|^k dM_eps.
inline double kernel_moment(const BackgroundKernel& kernel, int k) {
    if (k < 0)
        throw std::invalid_argument("kernel_moment: k must be nonnegative");
    if (k > kernel.max_moment())
        throw UnsupportedMoment("kernel '" + kernel.name() + "' has no finite moment of order " +
                                std::to_string(k));
    if (k == 0)
        return 1.0;
    if (!kernel.has_atoms() && !kernel.has_density()) {
        // Tabulated kernels are symmetric; even absolute moments equal the signed ones.
        const auto& m = kernel.tracked_moments();
        if (k % 2 == 0 && static_cast<std::size_t>(k) < m.size())
            return m[static_cast<std::size_t>(k)];
        throw UnsupportedMoment("kernel '" + kernel.name() + "': m_" + std::to_string(k) +
                                " is not available from a tabulated symbol");
    }
    return kernel.measure_moment(k, true);
}

/// Signed moment int v^k dM_eps.
inline double kernel_signed_moment(const BackgroundKernel& kernel, int k) {
    if (k > kernel.max_moment())
        throw UnsupportedMoment("kernel '" + kernel.name() + "' has no finite moment of order " +
                                std::to_string(k));
    const auto& m = kernel.tracked_moments();
    if (k >= 0 && static_cast<std::size_t>(k) < m.size())
        return m[static_cast<std::size_t>(k)];
    return kernel.measure_moment(k, false);
}

/// B_eps = 2 m_4(M_eps) / eps^2 with the signed fourth moment.
inline double b_epsilon(const BackgroundKernel& kernel) {
    const double e = kernel.epsilon();
    return 2.0 * kernel_signed_moment(kernel, 4) / (e * e);
}

/// sup_{|xi| <= R} |A_eps(xi) - sigma^2 xi^2| on a uniform grid of 8193 points.
inline double symbol_deviation(const BackgroundKernel& kernel, double sigma_sq, double R) {
    if (!(R > 0.0))
        throw std::invalid_argument("symbol_deviation: R must be positive");
    constexpr int half = 4096;
    double best = 0.0;
    for (int i = -half; i <= half; ++i) {
        const double xi = R * static_cast<double>(i) / half;
        best = std::max(best, std::abs(generator_symbol(kernel, xi) - sigma_sq * xi * xi));
    }
    return best;
}

} // namespace rosenau
