#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "oracles.hpp"
#include "rosenau/initial_data.hpp"
#include "rosenau/wild.hpp"

using namespace rosenau;

TEST(PoissonTail, MatchesDirectSummation) {
    for (double mu : {0.3, 1.0, 7.5, 40.0, 300.0}) {
        for (int n : {0, 1, 5, 20, 60, 400}) {
            const double expected = oracle::poisson_tail(mu, n);
            if (expected < 1e-290)
                continue;
            EXPECT_NEAR(poisson_tail(mu, n), expected, 1e-12 * expected + 1e-300) << mu << ' ' << n;
        }
    }
}

TEST(TruncationOrder, Examples) {
    EXPECT_EQ(truncation_order(0.0, 1e-12), 0);
    EXPECT_EQ(truncation_order(1.0, 1e-12), 14);
    EXPECT_GT(oracle::poisson_tail(1.0, 13), 1e-12);
    EXPECT_LE(oracle::poisson_tail(1.0, 14), 1e-12);
}

TEST(TruncationOrder, Minimality) {
    for (double mu : {0.01, 0.5, 3.0, 25.0, 200.0, 2000.0}) {
        for (double tol : {1e-3, 1e-8, 1e-12}) {
            const int n = truncation_order(mu, tol);
            EXPECT_LE(poisson_tail(mu, n), tol);
            if (n > 0) {
                EXPECT_GT(poisson_tail(mu, n - 1), tol);
            }
        }
    }
    EXPECT_THROW(truncation_order(-1.0, 1e-3), std::invalid_argument);
    EXPECT_THROW(truncation_order(1.0, 1.5), std::invalid_argument);
}

TEST(WildTruncation, TailProperties) {
    double prev = 1.0;
    for (int n = 0; n < 40; ++n) {
        const WildTruncation w = make_truncation(3.0, n);
        EXPECT_GE(w.tail_mass, 0.0);
        EXPECT_LE(w.tail_mass, 1.0);
        EXPECT_LT(w.tail_mass, prev);
        prev = w.tail_mass;
    }
    EXPECT_LT(prev, 1e-15);
}

TEST(WildPartialSum, ZeroTermsIsInitialLayer) {
    const GridSpec g(60.0, 512);
    const SpectralField g0 = make_initial("bimodal", g);
    const auto k = rosenau_kernel(0.5, 1.0);
    const double t = 0.4;
    const WildSum w = wild_partial_sum(g0, k, t, 0);
    const double e = std::exp(-collision_intensity(k, t));
    for (std::size_t i = 0; i < g.points(); ++i)
        EXPECT_NEAR(std::abs(w.field[i] - e * g0[i]), 0.0, 1e-16);
    EXPECT_FALSE(w.delegated);
}

TEST(WildPartialSum, TransmittedMass) {
    const GridSpec g(60.0, 256);
    const auto k = rosenau_kernel(1.0, 1.0); // mu = t
    const WildSum w = wild_partial_sum(dirac_field(g), k, 1.0, 1);
    EXPECT_NEAR(w.field.mass(), 0.7357588823, 1e-10);
}

TEST(WildPartialSum, MonotoneMass) {
    const GridSpec g(60.0, 256);
    const auto k = bernoulli_kernel(0.3, 1.0);
    double prev = 0.0;
    for (int n = 0; n < 60; ++n) {
        const double m = wild_partial_sum(dirac_field(g), k, 0.5, n).field.mass();
        EXPECT_GE(m, prev);
        EXPECT_LE(m, 1.0 + 1e-15);
        prev = m;
    }
}

TEST(WildPartialSum, ConvergesToFourierPropagator) {
    const GridSpec g(200.0, 2048);
    const SpectralField g0 = make_initial("gaussian", g);
    for (const auto& k : {rosenau_kernel(0.5, 1.0), bernoulli_kernel(0.5, 1.0), rosenau_kernel(0.1, 1.0),
                          bernoulli_kernel(0.1, 1.0)}) {
        for (double t : {0.1, 1.0, 10.0}) {
            const double mu = collision_intensity(k, t);
            const int n = truncation_order(mu, 1e-12);
            const WildSum w = wild_partial_sum(g0, k, t, n);
            const SpectralField f = rosenau_propagate(g0, k, t);
            double gap = 0.0;
            for (std::size_t i = 0; i < g.points(); ++i)
                gap = std::max(gap, std::abs(w.field[i] - f[i]));
            EXPECT_LE(gap, 1e-10) << k.name() << " eps=" << k.epsilon() << " t=" << t;
            EXPECT_LE(gap, w.truncation.tail_mass + 1e-12);
        }
    }
}

TEST(WildPartialSum, DelegatesAtLargeIntensity) {
    const GridSpec g(60.0, 256);
    const auto k = rosenau_kernel(0.01, 1.0);
    const double t = 1.0; // mu = 10^4
    const int n = truncation_order(collision_intensity(k, t), 1e-12);
    const WildSum w = wild_partial_sum(dirac_field(g), k, t, n);
    EXPECT_TRUE(w.delegated);
    EXPECT_FALSE(wild_partial_sum(dirac_field(g), k, t, 10).delegated);
}

TEST(CdFundamentalAtoms, BinomialRows) {
    const double e = 0.2, s = 1.0;
    const auto k = bernoulli_kernel(e, s);
    const auto a0 = cd_fundamental_atoms(k, 0);
    ASSERT_EQ(a0.size(), 1u);
    EXPECT_EQ(a0[0].location, 0.0);
    EXPECT_EQ(a0[0].weight, 1.0);

    const auto a2 = cd_fundamental_atoms(k, 2);
    ASSERT_EQ(a2.size(), 3u);
    EXPECT_DOUBLE_EQ(a2[0].location, -2 * e * s);
    EXPECT_EQ(a2[0].weight, 0.25);
    EXPECT_EQ(a2[1].location, 0.0);
    EXPECT_EQ(a2[1].weight, 0.5);
    EXPECT_DOUBLE_EQ(a2[2].location, 2 * e * s);
    EXPECT_EQ(a2[2].weight, 0.25);

    const auto a3 = cd_fundamental_atoms(k, 3);
    ASSERT_EQ(a3.size(), 4u);
    const double w3[] = {0.125, 0.375, 0.375, 0.125};
    const double x3[] = {-3, -1, 1, 3};
    for (int j = 0; j < 4; ++j) {
        EXPECT_EQ(a3[j].weight, w3[j]);
        EXPECT_DOUBLE_EQ(a3[j].location, x3[j] * e * s);
    }
    double total = 0.0;
    for (const auto& a : cd_fundamental_atoms(k, 37))
        total += a.weight;
    EXPECT_NEAR(total, 1.0, 1e-15);
    EXPECT_THROW(cd_fundamental_atoms(rosenau_kernel(0.2, 1.0), 2), UnsupportedKernel);
}

TEST(CdWildSolution, Structure) {
    const double e = 0.1;
    const auto k = bernoulli_kernel(e, 1.0);
    const GridSpec g = default_grid(1.0, 5.0, 1024);
    const MixedDistribution d0 = cd_wild_solution(k, 0.0, 1e-12, g);
    ASSERT_EQ(d0.atoms.size(), 1u);
    EXPECT_EQ(d0.atoms[0].location, 0.0);
    EXPECT_EQ(d0.atoms[0].weight, 1.0);
    EXPECT_TRUE(d0.density.empty());

    const double tol = 1e-12;
    const MixedDistribution d = cd_wild_solution(k, 5.0, tol, g);
    EXPECT_LE(d.mass(), 1.0 + 1e-13);
    EXPECT_GE(d.mass(), 1.0 - tol - 1e-13);
    for (const auto& a : d.atoms) {
        EXPECT_GE(a.weight, 0.0);
        const double m = a.location / e;
        EXPECT_NEAR(m, std::round(m), 1e-9);
    }
    // Parity: weights symmetric under v -> -v.
    for (std::size_t i = 0; i < d.atoms.size(); ++i)
        EXPECT_EQ(d.atoms[i].weight, d.atoms[d.atoms.size() - 1 - i].weight);
    EXPECT_THROW(cd_wild_solution(rosenau_kernel(0.1, 1.0), 1.0, tol, g), UnsupportedKernel);
}

TEST(CdWildSolution, TransformMatchesSpectral) {
    const auto k = bernoulli_kernel(0.2, 1.0);
    const GridSpec g = default_grid(1.0, 3.0, 1024);
    const double tol = 1e-12;
    for (double t : {0.3, 3.0}) {
        const SpectralField f = forward_transform(cd_wild_solution(k, t, tol, g));
        const SpectralField p = rosenau_propagate(dirac_field(g), k, t);
        double gap = 0.0;
        for (std::size_t i = 0; i < g.points(); ++i)
            gap = std::max(gap, std::abs(f[i] - p[i]));
        EXPECT_LE(gap, tol + 1e-13);
    }
}

TEST(CdWildSolution, GridTooSmall) {
    const auto k = bernoulli_kernel(0.5, 1.0);
    EXPECT_THROW(cd_wild_solution(k, 50.0, 1e-12, GridSpec(4.0, 64)), GridTooSmall);
}
