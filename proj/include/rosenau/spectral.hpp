#pragma once

// Distributions on conjugate velocity/frequency grids and the exact
// Fourier-space propagators of the heat and Rosenau equations.
//
// Convention: f^(xi) = int exp(-i xi v) f(v) dv, so that
// ||f||_2^2 = (1 / 2 pi) int |f^(xi)|^2 dxi.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rosenau/errors.hpp"
#include "rosenau/fft.hpp"
#include "rosenau/grid.hpp"
#include "rosenau/kernels.hpp"
#include "rosenau/moments.hpp"

namespace rosenau {

using cplx = std::complex<double>;
using FourierFn = std::function<cplx(double)>;

/// Samples values[k] ~ f^(xi_k) on the frequency grid of `grid`. Optionally
/// carries the signed moments of the underlying measure and an evaluator of
/// f^ off the grid (used for exact dilation).
class SpectralField {
public:
    SpectralField() = default;

    SpectralField(GridSpec grid, std::vector<cplx> values, Moments moments = {}, FourierFn exact = {})
        : grid_(grid), values_(std::move(values)), moments_(std::move(moments)), exact_(std::move(exact)) {
        if (values_.size() != grid_.points())
            throw std::invalid_argument("SpectralField: value count " + std::to_string(values_.size()) +
                                        " does not match grid points " + std::to_string(grid_.points()));
    }

    /// Field sampled from a transform known in closed form.
    static SpectralField sample(const GridSpec& grid, FourierFn fn, Moments moments = {}) {
        std::vector<cplx> values(grid.points());
        for (std::size_t k = 0; k < values.size(); ++k)
            values[k] = fn(grid.xi(k));
        return SpectralField(grid, std::move(values), std::move(moments), std::move(fn));
    }

    const GridSpec& grid() const { return grid_; }
    std::span<const cplx> values() const { return values_; }
    std::vector<cplx>& mutable_values() { return values_; }
    cplx operator[](std::size_t k) const { return values_[k]; }
    std::size_t size() const { return values_.size(); }

    const Moments& moments() const { return moments_; }
    bool has_moments() const { return !moments_.empty(); }

    bool has_exact() const { return static_cast<bool>(exact_); }
    const FourierFn& exact() const { return exact_; }

    /// f^(0), the total mass.
    double mass() const { return values_[grid_.zero_bin()].real(); }

private:
    GridSpec grid_;
    std::vector<cplx> values_;
    Moments moments_;
    FourierFn exact_;
};

/// Pointwise product with a multiplier given in closed form; the multiplier
/// is the transform of a measure with moments `mult_moments` (empty when
/// unknown).
inline SpectralField multiply(const SpectralField& f, const FourierFn& multiplier, const Moments& mult_moments) {
    const GridSpec& g = f.grid();
    std::vector<cplx> values(g.points());
    for (std::size_t k = 0; k < values.size(); ++k)
        values[k] = f[k] * multiplier(g.xi(k));
    FourierFn exact;
    if (f.has_exact())
        exact = [base = f.exact(), multiplier](double xi) { return base(xi) * multiplier(xi); };
    return SpectralField(g, std::move(values), moments::convolve(f.moments(), mult_moments), std::move(exact));
}

/// Product of two fields on the same grid (transform of the convolution).
inline SpectralField multiply(const SpectralField& a, const SpectralField& b) {
    if (!(a.grid() == b.grid()))
        throw std::invalid_argument("multiply: fields live on different grids");
    std::vector<cplx> values(a.size());
    for (std::size_t k = 0; k < values.size(); ++k)
        values[k] = a[k] * b[k];
    FourierFn exact;
    if (a.has_exact() && b.has_exact())
        exact = [fa = a.exact(), fb = b.exact()](double xi) { return fa(xi) * fb(xi); };
    return SpectralField(a.grid(), std::move(values), moments::convolve(a.moments(), b.moments()),
                         std::move(exact));
}

/// Finite measure: a density sampled at the grid nodes plus weighted atoms.
/// The density array may be empty (purely atomic measure). Densities coming
/// out of numerical inversion are signed; use is_probability() to test the
/// nonnegativity invariant.
struct MixedDistribution {
    GridSpec grid;
    std::vector<double> density;
    std::vector<Atom> atoms;

    bool has_density() const { return !density.empty(); }

    double density_mass() const {
        double s = 0.0;
        for (double x : density)
            s += x;
        return grid.dv() * s;
    }

    double atom_mass() const {
        double s = 0.0;
        for (const Atom& a : atoms)
            s += a.weight;
        return s;
    }

    double mass() const { return density_mass() + atom_mass(); }

    /// Structural checks: density length N or 0, atoms inside the domain,
    /// finite entries.
    void validate() const {
        if (!density.empty() && density.size() != grid.points())
            throw std::invalid_argument("MixedDistribution: density has " + std::to_string(density.size()) +
                                        " values, grid has " + std::to_string(grid.points()));
        for (double x : density)
            if (!std::isfinite(x))
                throw std::invalid_argument("MixedDistribution: non-finite density value");
        for (const Atom& a : atoms) {
            if (!std::isfinite(a.location) || !std::isfinite(a.weight))
                throw std::invalid_argument("MixedDistribution: non-finite atom");
            if (!grid.contains(a.location))
                throw std::invalid_argument("MixedDistribution: atom at " + std::to_string(a.location) +
                                            " lies outside the grid domain");
        }
    }

    bool is_probability(double tol = 0.0) const {
        for (double x : density)
            if (x < -tol)
                return false;
        for (const Atom& a : atoms)
            if (a.weight < 0.0)
                return false;
        return true;
    }
};

/// Raw moment sum_j w_j v_j^k + dv sum_j v_j^k f_j (|v|^k when !signed_power).
inline double raw_moment(const MixedDistribution& d, int k, bool signed_power = true) {
    if (k < 0)
        throw std::invalid_argument("moment order must be nonnegative");
    auto power = [k, signed_power](double v) {
        if (k == 0)
            return 1.0;
        return std::pow(signed_power ? v : std::abs(v), k);
    };
    double total = 0.0;
    for (const Atom& a : d.atoms)
        total += a.weight * power(a.location);
    if (d.has_density()) {
        double s = 0.0;
        for (std::size_t j = 0; j < d.density.size(); ++j)
            s += power(d.grid.v(j)) * d.density[j];
        total += d.grid.dv() * s;
    }
    return total;
}

namespace detail {

/// Adds sum_a w_a exp(-i xi_k x_a) to values (sign = -1) or subtracts it
/// (sign = +1 flips the sum's sign), using a phase recurrence that is
/// re-anchored every 64 bins.
inline void accumulate_atoms(const GridSpec& g, std::span<const Atom> atoms, double sign,
                             std::span<cplx> values) {
    const std::size_t n = g.points();
    for (const Atom& a : atoms) {
        const cplx step = std::polar(1.0, -g.dxi() * a.location);
        cplx phase;
        for (std::size_t k = 0; k < n; ++k) {
            if (k % 64 == 0)
                phase = std::polar(1.0, -g.xi(k) * a.location);
            values[k] += sign * a.weight * phase;
            phase *= step;
        }
    }
}

inline double alternating(std::size_t j) { return (j % 2 == 0) ? 1.0 : -1.0; }

/// dv * sum_j f_j exp(-i xi v_j), the trigonometric transform of samples.
inline cplx density_transform_at(const GridSpec& g, std::span<const double> density, double xi) {
    const cplx step = std::polar(1.0, -xi * g.dv());
    cplx phase;
    cplx sum = 0.0;
    for (std::size_t j = 0; j < density.size(); ++j) {
        if (j % 64 == 0)
            phase = std::polar(1.0, -xi * g.v(j));
        sum += density[j] * phase;
        phase *= step;
    }
    return g.dv() * sum;
}

inline cplx atoms_transform_at(std::span<const Atom> atoms, double xi) {
    cplx sum = 0.0;
    for (const Atom& a : atoms)
        sum += a.weight * std::polar(1.0, -xi * a.location);
    return sum;
}

} // namespace detail

/// FFT of the density (sign e^{-i xi v}) plus the exact atomic sum. The
/// returned field carries the moments of `d` up to kTrackedMomentOrder and
/// an evaluator of the same trigonometric transform off the grid.
inline SpectralField forward_transform(const MixedDistribution& d) {
    d.validate();
    const GridSpec& g = d.grid;
    const std::size_t n = g.points();
    std::vector<cplx> values(n, cplx(0.0));
    if (d.has_density()) {
        for (std::size_t j = 0; j < n; ++j)
            values[j] = detail::alternating(j) * d.density[j];
        fft::forward(values);
        for (std::size_t k = 0; k < n; ++k)
            values[k] *= g.dv() * detail::alternating(k);
    }
    detail::accumulate_atoms(g, d.atoms, 1.0, values);
    // The DC bin is the mass by definition; pin it against FFT rounding.
    values[g.zero_bin()] = cplx(d.mass(), 0.0);

    Moments m(kTrackedMomentOrder + 1);
    for (int k = 0; k <= kTrackedMomentOrder; ++k)
        m[static_cast<std::size_t>(k)] = raw_moment(d, k, true);

    FourierFn exact = [g, density = d.density, atoms = d.atoms](double xi) {
        cplx s = detail::atoms_transform_at(atoms, xi);
        if (!density.empty())
            s += detail::density_transform_at(g, density, xi);
        return s;
    };
    return SpectralField(g, std::move(values), std::move(m), std::move(exact));
}

/// Relative Hermitian-symmetry tolerance for inverse_transform.
inline constexpr double kHermitianTolerance = 1e-10;

/// Density on the grid from a transform whose atoms are known. The atoms'
/// transform is subtracted exactly before the inverse FFT; they are returned
/// unchanged in the result.
inline MixedDistribution inverse_transform(const SpectralField& f, std::span<const Atom> known_atoms = {}) {
    const GridSpec& g = f.grid();
    const std::size_t n = g.points();
    std::vector<cplx> values(f.values().begin(), f.values().end());
    detail::accumulate_atoms(g, known_atoms, -1.0, values);

    double scale = 0.0;
    for (const cplx& z : values)
        scale = std::max(scale, std::abs(z));
    for (std::size_t k = 1; k < n; ++k) {
        if (std::abs(values[k] - std::conj(values[n - k])) > kHermitianTolerance * std::max(scale, 1e-300) + 1e-300)
            throw SymmetryError("inverse_transform: field is not Hermitian at xi = " + std::to_string(g.xi(k)));
    }
    if (std::abs(values[g.zero_bin()].imag()) > kHermitianTolerance * std::max(scale, 1e-300))
        throw SymmetryError("inverse_transform: mass bin is not real");

    for (std::size_t k = 0; k < n; ++k)
        values[k] *= detail::alternating(k);
    fft::backward(values);
    MixedDistribution out;
    out.grid = g;
    out.density.resize(n);
    const double inv_l = 1.0 / g.length();
    for (std::size_t j = 0; j < n; ++j)
        out.density[j] = inv_l * detail::alternating(j) * values[j].real();
    out.atoms.assign(known_atoms.begin(), known_atoms.end());

    const Moments& m = f.moments();
    if (m.size() >= 3 && m[0] > 0.0) {
        const double mean = m[1] / m[0];
        const double var = std::max(m[2] / m[0] - mean * mean, 0.0);
        check_truncation(g, mean, var, "inverse_transform");
    }
    return out;
}

/// Closed-form transforms used as multipliers.
namespace multipliers {

inline FourierFn heat(double sigma_sq, double t) {
    return [c = sigma_sq * t](double xi) { return cplx(std::exp(-c * xi * xi), 0.0); };
}

inline FourierFn rosenau(const BackgroundKernel& kernel, double t) {
    return [kernel, t](double xi) { return std::exp(-generator_symbol(kernel, xi) * t); };
}

} // namespace multipliers

/// Moments of the Rosenau fundamental solution, a compound Poisson law with
/// intensity mu = lambda t / eps^2 and jump law M_eps.
inline Moments rosenau_propagator_moments(const BackgroundKernel& kernel, double t) {
    const Moments& mk = kernel.tracked_moments();
    const double e = kernel.epsilon();
    const double mu = kernel.lambda() * t / (e * e);
    std::vector<double> kappa(mk.size(), 0.0);
    for (std::size_t k = 1; k < mk.size(); ++k)
        kappa[k] = mu * mk[k];
    return moments::from_cumulants(kappa);
}

inline Moments heat_propagator_moments(double sigma_sq, double t) {
    return moments::gaussian(2.0 * sigma_sq * t);
}

inline void require_nonnegative_time(double t, const char* who) {
    if (!(t >= 0.0) || !std::isfinite(t))
        throw std::invalid_argument(std::string(who) + ": time must be finite and nonnegative");
}

/// g^(xi, t) = g0^(xi) exp(-sigma^2 xi^2 t).
inline SpectralField heat_propagate(const SpectralField& g0, double sigma_sq, double t) {
    require_nonnegative_time(t, "heat_propagate");
    return multiply(g0, multipliers::heat(sigma_sq, t), heat_propagator_moments(sigma_sq, t));
}

/// g_eps^(xi, t) = g0^(xi) exp(-A_eps(xi) t).
inline SpectralField rosenau_propagate(const SpectralField& g0, const BackgroundKernel& kernel, double t) {
    require_nonnegative_time(t, "rosenau_propagate");
    return multiply(g0, multipliers::rosenau(kernel, t), rosenau_propagator_moments(kernel, t));
}

/// mu = lambda t / eps^2, the Poisson intensity of collisions up to time t.
inline double collision_intensity(const BackgroundKernel& kernel, double t) {
    const double e = kernel.epsilon();
    return kernel.lambda() * t / (e * e);
}

/// Field of the Dirac mass at the origin.
inline SpectralField dirac_field(const GridSpec& grid) {
    return SpectralField::sample(grid, [](double) { return cplx(1.0, 0.0); }, moments::dirac());
}

struct SingularSplit {
    /// G_1(xi, t) = exp(-mu) (exp(mu M^(xi)) - 1).
    SpectralField regular;
    /// exp(-mu), the mass of the atom at the origin.
    double atom_weight = 1.0;
};

inline SingularSplit singular_split(const BackgroundKernel& kernel, const GridSpec& grid, double t) {
    require_nonnegative_time(t, "singular_split");
    const double mu = collision_intensity(kernel, t);
    const double w = std::exp(-mu);
    // Where mu M^ is small, exp(-mu) expm1(mu M^) keeps relative accuracy of
    // the decaying tail; elsewhere the difference of exponentials avoids
    // amplifying the rounding of mu M^ by mu.
    FourierFn g1 = [kernel, t, mu, w](double xi) {
        const cplx m = kernel.symbol(xi);
        if (m.imag() == 0.0 && std::abs(mu * m.real()) <= 1.0)
            return cplx(w * std::expm1(mu * m.real()), 0.0);
        return std::exp(-generator_symbol(kernel, xi) * t) - w;
    };
    Moments mom = rosenau_propagator_moments(kernel, t);
    if (!mom.empty())
        mom[0] -= w;
    return {SpectralField::sample(grid, std::move(g1), std::move(mom)), w};
}

/// P_reg^(xi, t) = exp(-mu) (exp(mu M^(xi)) - (1 - M^(xi))): the propagator with
/// its singular part (1 - M_eps) exp(-mu) removed. Its measure has no atom.
inline SpectralField regularized_propagator(const BackgroundKernel& kernel, const GridSpec& grid, double t) {
    require_nonnegative_time(t, "regularized_propagator");
    const double mu = collision_intensity(kernel, t);
    const double w = std::exp(-mu);
    FourierFn p = [kernel, t, w](double xi) {
        return std::exp(-generator_symbol(kernel, xi) * t) - kernel.deficit(xi) * w;
    };
    Moments mom = rosenau_propagator_moments(kernel, t);
    const Moments& mk = kernel.tracked_moments();
    if (!mom.empty()) {
        const std::size_t n = std::min(mom.size(), mk.size());
        mom.resize(n);
        mom[0] -= w * (1.0 - mk[0]);
        for (std::size_t k = 1; k < n; ++k)
            mom[k] += w * mk[k];
    }
    return SpectralField::sample(grid, std::move(p), std::move(mom));
}

/// g_reg^ = g0^ * P_reg^.
inline SpectralField regularized_solution(const SpectralField& g0, const BackgroundKernel& kernel, double t) {
    return multiply(g0, regularized_propagator(kernel, g0.grid(), t));
}

/// Fourier transform of the heat kernel Omega_sigma(., t).
inline SpectralField heat_kernel_field(const GridSpec& grid, double sigma_sq, double t) {
    require_nonnegative_time(t, "heat_kernel_field");
    return SpectralField::sample(grid, multipliers::heat(sigma_sq, t), heat_propagator_moments(sigma_sq, t));
}

/// omega_sigma^(xi) = exp(-sigma^2 xi^2): the heat kernel at t = 1, variance 2 sigma^2.
inline SpectralField gaussian_reference(const GridSpec& grid, double sigma_sq) {
    return heat_kernel_field(grid, sigma_sq, 1.0);
}

} // namespace rosenau
