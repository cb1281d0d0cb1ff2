#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "tcmfg/coupling.hpp"
#include "tcmfg/error.hpp"

using namespace tcmfg;

namespace {
GridSpec grid_of(int dim, std::size_t points) {
    GridSpec g;
    g.dim = dim;
    g.points = points;
    g.half_width = 4.0;
    return g;
}

ProbabilityVector random_measure(const GridSpec& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> w(g.size());
    double total = 0.0;
    for (double& v : w) total += (v = std::pow(unit(rng), 3.0));
    for (double& v : w) v /= total;
    return ProbabilityVector::unchecked(g, std::move(w));
}
} // namespace

TEST(Coupling, KernelIsAProbabilityDensity) {
    for (int dim : {1, 2}) {
        const GridSpec g = grid_of(dim, dim == 1 ? 128 : 32);
        const Coupling c(g, 0.6, 2.0);
        double mass = 0.0, auto_mass = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) mass += c.kernel()[k], auto_mass += c.autocorrelation()[k];
        EXPECT_NEAR(mass * g.cell_volume(), 1.0, 1e-13);
        EXPECT_NEAR(auto_mass * g.cell_volume(), 1.0, 1e-13);
    }
}

TEST(Coupling, UniformMeasureGivesAConstant) {
    const GridSpec g = grid_of(1, 128);
    const Coupling c(g, 0.5, 3.0);
    const GridFunction out = c(ProbabilityVector::uniform(g));
    for (std::size_t k = 0; k < g.size(); ++k) EXPECT_NEAR(out[k], -3.0 / g.period(), 1e-14);
}

TEST(Coupling, DiracGivesTheCenteredAutocorrelation) {
    const GridSpec g = grid_of(1, 128);
    const Coupling c(g, 0.4, 1.5);
    const std::size_t at = 40;
    const GridFunction out = c(ProbabilityVector::dirac(g, at));
    // autocorrelation() holds the kernel at x_k + R, i.e. centered on node N/2.
    for (std::size_t k = 0; k < g.size(); ++k) {
        const std::size_t shifted = (k + g.points / 2 + g.points - at) % g.points;
        EXPECT_NEAR(out[k], -1.5 * c.autocorrelation()[shifted], 1e-14);
    }
    EXPECT_LE(out.sup_norm(), c.sup_bound() + 1e-15);
    EXPECT_NEAR(out.min(), -c.sup_bound(), 1e-14);
}

TEST(Coupling, MonotoneOnRandomPairs) {
    std::mt19937_64 rng(4);
    for (int dim : {1, 2}) {
        const GridSpec g = grid_of(dim, dim == 1 ? 256 : 32);
        const Coupling c(g, 0.5, 2.0);
        for (int i = 0; i < 50; ++i) {
            const auto a = random_measure(g, rng), b = random_measure(g, rng);
            const double p = monotonicity_pairing(c, a, b);
            EXPECT_LE(p, 1e-12);
            EXPECT_NEAR(p, -smoothed_l2_squared(c, a, b), 1e-10);
        }
    }
}

TEST(Coupling, SmoothedL2MatchesDirectSum) {
    const GridSpec g = grid_of(1, 64);
    const Coupling c(g, 0.5, 2.0);
    std::mt19937_64 rng(5);
    const auto a = random_measure(g, rng), b = random_measure(g, rng);
    const GridFunction sa = c.smoothed(a), sb = c.smoothed(b);
    double direct = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) direct += (sa[k] - sb[k]) * (sa[k] - sb[k]);
    EXPECT_NEAR(smoothed_l2_squared(c, a, b), 2.0 * direct * g.cell_volume(), 1e-12);
}

TEST(Coupling, LipschitzBoundHoldsForOutputs) {
    const GridSpec g = grid_of(1, 256);
    const Coupling c(g, 0.3, 4.0);
    std::mt19937_64 rng(6);
    for (int i = 0; i < 10; ++i) {
        const GridFunction out = c(random_measure(g, rng));
        for (std::size_t k = 0; k < g.size(); ++k)
            EXPECT_LE(std::abs(out[(k + 1) % g.size()] - out[k]), c.lipschitz_bound() * g.spacing() + 1e-14);
    }
}

TEST(Coupling, ZeroCouplingAndValidation) {
    const GridSpec g = grid_of(1, 64);
    const Coupling z = Coupling::zero(g);
    EXPECT_TRUE(z.is_zero());
    EXPECT_EQ(z(ProbabilityVector::dirac(g, 3)).sup_norm(), 0.0);
    EXPECT_THROW(Coupling(g, 0.5, -1.0), InvalidArgument);
    EXPECT_THROW(Coupling(g, 0.0, 1.0), InvalidArgument);
}
