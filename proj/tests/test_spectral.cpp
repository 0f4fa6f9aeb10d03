#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "rosenau/initial_data.hpp"
#include "rosenau/spectral.hpp"

using namespace rosenau;

namespace {

MixedDistribution sampled_omega(const GridSpec& g, double sigma) {
    MixedDistribution d;
    d.grid = g;
    d.density.resize(g.points());
    for (std::size_t j = 0; j < g.points(); ++j)
        d.density[j] = oracle::omega(g.v(j), sigma);
    return d;
}

double sup_gap(const SpectralField& a, const SpectralField& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

} // namespace

TEST(Grid, Invariants) {
    EXPECT_THROW(GridSpec(10.0, 8), std::invalid_argument);
    EXPECT_THROW(GridSpec(10.0, 100), std::invalid_argument);
    EXPECT_THROW(GridSpec(-1.0, 64), std::invalid_argument);
    const GridSpec g(8.0, 64);
    EXPECT_DOUBLE_EQ(g.dv(), 0.125);
    EXPECT_DOUBLE_EQ(g.dxi(), 2.0 * std::numbers::pi / 8.0);
    EXPECT_DOUBLE_EQ(g.nyquist(), std::numbers::pi / 0.125);
    EXPECT_DOUBLE_EQ(g.xi(g.zero_bin()), 0.0);
    EXPECT_DOUBLE_EQ(g.v(0), -4.0);
}

TEST(Grid, DefaultSizing) {
    const GridSpec g = default_grid(1.0, 3.0, 1024);
    EXPECT_DOUBLE_EQ(g.length(), 80.0);
    EXPECT_THROW(check_truncation(GridSpec(4.0, 64), 0.0, 1.0), GridTooSmall);
    EXPECT_NO_THROW(check_truncation(g, 0.0, 1.0));
}

TEST(ForwardTransform, UnitAtomIsConstant) {
    MixedDistribution d;
    d.grid = GridSpec(20.0, 256);
    d.atoms = {{0.0, 1.0}};
    const SpectralField f = forward_transform(d);
    for (std::size_t k = 0; k < f.size(); ++k)
        EXPECT_NEAR(std::abs(f[k] - cplx(1.0)), 0.0, 1e-14);
}

TEST(ForwardTransform, TwoAtomsGiveCosine) {
    const double a = 0.7;
    MixedDistribution d;
    d.grid = GridSpec(20.0, 512);
    d.atoms = {{-a, 0.5}, {a, 0.5}};
    const SpectralField f = forward_transform(d);
    for (std::size_t k = 0; k < f.size(); ++k)
        EXPECT_NEAR(std::abs(f[k] - std::cos(a * d.grid.xi(k))), 0.0, 1e-13);
}

TEST(ForwardTransform, GaussianSample) {
    const double sigma = 1.0;
    const GridSpec g(40.0 * sigma, 1024);
    const SpectralField f = forward_transform(sampled_omega(g, sigma));
    double err = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double xi = g.xi(k);
        err = std::max(err, std::abs(f[k] - std::exp(-sigma * sigma * xi * xi)));
    }
    EXPECT_LE(err, 1e-10);
    EXPECT_NEAR(f.mass(), 1.0, 1e-12);
    EXPECT_NEAR(f.moments()[2], 2.0 * sigma * sigma, 1e-10);
}

TEST(InverseTransform, RoundTrip) {
    const GridSpec g(40.0, 1024);
    const MixedDistribution d = sampled_omega(g, 1.0);
    const MixedDistribution back = inverse_transform(forward_transform(d));
    double err = 0.0;
    for (std::size_t j = 0; j < g.points(); ++j)
        err = std::max(err, std::abs(back.density[j] - d.density[j]));
    EXPECT_LE(err, 1e-10);
}

TEST(InverseTransform, DeclaredAtomLeavesZeroDensity) {
    const GridSpec g(20.0, 256);
    const std::vector<Atom> atom{{0.0, 1.0}};
    const MixedDistribution d = inverse_transform(dirac_field(g), atom);
    for (double x : d.density)
        EXPECT_NEAR(x, 0.0, 1e-14);
    ASSERT_EQ(d.atoms.size(), 1u);
    EXPECT_DOUBLE_EQ(d.mass(), 1.0 + d.density_mass());
}

TEST(InverseTransform, HeatKernel) {
    const double s2 = 1.0, t = 2.0;
    const GridSpec g = default_grid(1.0, t, 2048);
    const MixedDistribution d = inverse_transform(heat_kernel_field(g, s2, t));
    double l1 = 0.0;
    for (std::size_t j = 0; j < g.points(); ++j) {
        const double v = g.v(j);
        const double exact = std::exp(-v * v / (4.0 * s2 * t)) / std::sqrt(4.0 * std::numbers::pi * s2 * t);
        l1 += std::abs(d.density[j] - exact) * g.dv();
    }
    EXPECT_LE(l1, 1e-8);
}

TEST(InverseTransform, RejectsNonHermitian) {
    const GridSpec g(20.0, 64);
    std::vector<cplx> v(64, cplx(0.0));
    v[g.zero_bin()] = 1.0;
    v[g.zero_bin() + 3] = cplx(0.0, 0.5);
    EXPECT_THROW(inverse_transform(SpectralField(g, v)), SymmetryError);
}

TEST(HeatPropagate, IdentityAndSemigroup) {
    const GridSpec g(60.0, 1024);
    const SpectralField g0 = make_initial("bimodal", g);
    EXPECT_THROW(heat_propagate(g0, 1.0, -1.0), std::invalid_argument);
    EXPECT_EQ(sup_gap(heat_propagate(g0, 1.0, 0.0), g0), 0.0);
    const SpectralField two = heat_propagate(heat_propagate(g0, 1.0, 0.7), 1.0, 1.3);
    EXPECT_LE(sup_gap(two, heat_propagate(g0, 1.0, 2.0)), 1e-13);
}

TEST(HeatPropagate, DiracGivesHeatKernel) {
    const GridSpec g(60.0, 512);
    const SpectralField f = heat_propagate(dirac_field(g), 1.5, 0.8);
    for (std::size_t k = 0; k < f.size(); ++k)
        EXPECT_NEAR(std::abs(f[k] - std::exp(-1.5 * 0.8 * g.xi(k) * g.xi(k))), 0.0, 1e-15);
}

TEST(RosenauPropagate, BasicProperties) {
    const GridSpec g(60.0, 1024);
    const SpectralField g0 = make_initial("bimodal", g);
    for (const auto& k : {rosenau_kernel(0.3, 1.0), bernoulli_kernel(0.3, 1.0)}) {
        EXPECT_THROW(rosenau_propagate(g0, k, -0.1), std::invalid_argument);
        EXPECT_EQ(sup_gap(rosenau_propagate(g0, k, 0.0), g0), 0.0);
        for (double t : {0.1, 1.0, 10.0}) {
            const SpectralField f = rosenau_propagate(g0, k, t);
            EXPECT_NEAR(f.mass(), g0.mass(), 1e-15);
            EXPECT_LE(sup_gap(rosenau_propagate(rosenau_propagate(g0, k, 0.4 * t), k, 0.6 * t), f), 1e-13);
        }
        for (std::size_t i = 0; i < g.points(); ++i)
            EXPECT_LE(std::abs(std::exp(-generator_symbol(k, g.xi(i)) * 5.0)), 1.0);
    }
}

TEST(RosenauPropagate, CentralDifferenceSchemeNyquist) {
    const double e = 0.2, t = 0.03;
    const auto k = bernoulli_kernel(e, 1.0);
    const double xi = std::numbers::pi / e;
    EXPECT_NEAR(std::exp(-generator_symbol(k, xi) * t).real(), std::exp(-4.0 * t / (e * e)), 1e-15);
}

TEST(SingularSplit, Values) {
    const GridSpec g(60.0, 1024);
    const auto k = rosenau_kernel(1.0, 1.0);
    const SingularSplit s0 = singular_split(k, g, 0.0);
    EXPECT_EQ(s0.atom_weight, 1.0);
    for (std::size_t i = 0; i < g.points(); ++i)
        EXPECT_EQ(std::abs(s0.regular[i]), 0.0);
    const SingularSplit s1 = singular_split(k, g, 1.0);
    EXPECT_NEAR(s1.atom_weight, 0.3678794412, 1e-10);
    EXPECT_EQ(s1.atom_weight, std::exp(-1.0));
}

TEST(SingularSplit, ReproducesFundamentalSolution) {
    const GridSpec g(60.0, 2048);
    for (const auto& k : {rosenau_kernel(0.3, 1.0), bernoulli_kernel(0.3, 1.0)}) {
        for (double t : {0.05, 1.0, 4.0}) {
            const SingularSplit s = singular_split(k, g, t);
            const SpectralField full = rosenau_propagate(dirac_field(g), k, t);
            for (std::size_t i = 0; i < g.points(); ++i)
                EXPECT_NEAR(std::abs(s.regular[i] + s.atom_weight - full[i]), 0.0, 1e-14);
        }
    }
}

TEST(SingularSplit, RegularPartVanishesAtNyquist) {
    // eps = 0.1, t = 1 gives mu = 100.
    const auto k = rosenau_kernel(0.1, 1.0);
    const GridSpec g(60.0, 65536);
    ASSERT_GE(k.epsilon() * g.nyquist(), 100.0);
    const SingularSplit s = singular_split(k, g, 1.0);
    EXPECT_LE(std::abs(s.regular[0]), 1e-12);
}

TEST(RegularizedPropagator, Identities) {
    const GridSpec g(60.0, 1024);
    const auto k = rosenau_kernel(0.3, 1.0);
    const double t = 2.0;
    const SpectralField p = regularized_propagator(k, g, t);
    const SpectralField full = rosenau_propagate(dirac_field(g), k, t);
    const double w = std::exp(-collision_intensity(k, t));
    for (std::size_t i = 0; i < g.points(); ++i)
        EXPECT_LE(std::abs(p[i] + (1.0 - k.symbol(g.xi(i))) * w - full[i]), 1e-14);
    EXPECT_NEAR(p.mass(), 1.0, 1e-15);
    for (double tt : {0.5, 3.0, 20.0})
        EXPECT_NEAR(regularized_propagator(k, g, tt).mass(), 1.0, 1e-15);
    const SpectralField p0 = regularized_propagator(k, g, 0.0);
    for (std::size_t i = 0; i < g.points(); ++i)
        EXPECT_NEAR(std::abs(p0[i] - k.symbol(g.xi(i))), 0.0, 1e-15);
}

TEST(RegularizedSolution, Properties) {
    const GridSpec g(60.0, 1024);
    const auto k = rosenau_kernel(0.5, 1.0);
    const double t = 0.7;
    const SpectralField d = regularized_solution(dirac_field(g), k, t);
    const SpectralField p = regularized_propagator(k, g, t);
    EXPECT_EQ(sup_gap(d, p), 0.0);
    const SpectralField g0 = make_initial("bimodal", g);
    const SpectralField reg = regularized_solution(g0, k, t);
    const SpectralField full = rosenau_propagate(g0, k, t);
    EXPECT_NEAR(reg.mass(), 1.0, 1e-15);
    const double w = std::exp(-collision_intensity(k, t));
    EXPECT_LE(sup_gap(reg, full), 2.0 * w);
    for (std::size_t i = 0; i < g.points(); ++i)
        EXPECT_NEAR(std::abs(full[i] - reg[i] - g0[i] * (1.0 - k.symbol(g.xi(i))) * w), 0.0, 1e-15);
}

TEST(Positivity, InvertedRegularPartNonnegative) {
    const GridSpec g(80.0, 4096);
    const SpectralField g0 = make_initial("gaussian", g);
    for (const auto& k : {rosenau_kernel(0.3, 1.0), bernoulli_kernel(0.3, 1.0)}) {
        for (double t : {0.1, 1.0, 5.0}) {
            const MixedDistribution d = inverse_transform(rosenau_propagate(g0, k, t));
            double mx = 0.0, mn = 0.0;
            for (double x : d.density) {
                mx = std::max(mx, x);
                mn = std::min(mn, x);
            }
            EXPECT_GE(mn, -1e-8 * mx);
        }
    }
}

TEST(MixedDistribution, Validation) {
    MixedDistribution d;
    d.grid = GridSpec(10.0, 64);
    d.density.assign(10, 0.0);
    EXPECT_THROW(d.validate(), std::invalid_argument);
    d.density.clear();
    d.atoms = {{6.0, 1.0}};
    EXPECT_THROW(d.validate(), std::invalid_argument);
    d.atoms = {{1.0, -0.5}};
    EXPECT_NO_THROW(d.validate());
    EXPECT_FALSE(d.is_probability());
}
