#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "tcmfg/spectral.hpp"
#include "tcmfg/stencil.hpp"

using namespace tcmfg;

namespace {
GridSpec grid_1d(std::size_t points = 256, double half_width = 8.0) {
    GridSpec g;
    g.points = points;
    g.half_width = half_width;
    return g;
}
} // namespace

TEST(Spectral, TimeZeroIsIdentity) {
    const GridSpec g = grid_1d();
    const GridFunction phi = GridFunction::sample(g, [](double x) { return std::exp(-x * x) + 0.1 * x; });
    const GridFunction out = spectral_reference(pure_jump(1, LevyMeasureSpec::stable(0.3, 1.0)), phi, 0.0);
    for (std::size_t k = 0; k < g.size(); ++k) EXPECT_NEAR(out[k], phi[k], 1e-14);
}

TEST(Spectral, HeatSemigroupMatchesGaussianConvolution) {
    const GridSpec g = grid_1d(256, 10.0);
    LevyTriplet heat = pure_jump(1, LevyMeasureSpec::none());
    heat.diffusion = {Vec2{1.0, 0.0}, Vec2{0.0, 0.0}}; // L = d^2/dx^2
    const double s0 = 0.5, t = 0.3;
    const GridFunction phi = GridFunction::sample(g, [&](double x) { return std::exp(-x * x / (2 * s0 * s0)); });
    const GridFunction out = spectral_reference(heat, phi, t);
    // Gaussian of variance s0^2 convolved with the heat kernel of variance 2t.
    const double var = s0 * s0 + 2.0 * t;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double x = g.position(k)[0];
        EXPECT_NEAR(out[k], s0 / std::sqrt(var) * std::exp(-x * x / (2 * var)), 1e-12);
    }
}

TEST(Spectral, StableSemigroupConservesMass) {
    const GridSpec g = grid_1d();
    const GridFunction m = GridFunction::sample(g, [](double x) { return std::exp(-(x - 1) * (x - 1)); });
    const LevyTriplet t = pure_jump(1, LevyMeasureSpec::cgmy({1.0, 1.0, 3.0, 0.4}));
    const GridFunction out = spectral_reference(t, m, 2.0, true);
    double before = 0.0, after = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) before += m[k], after += out[k];
    EXPECT_NEAR(after, before, 1e-12 * before);
}

TEST(Spectral, StencilSymbolDrivesItsOwnSemigroup) {
    const GridSpec g = grid_1d(64, 4.0);
    const DiscreteLevyOp op(g, 0.25, {{{2, 0}, 1.0}, {{-1, 0}, 0.5}});
    const GridFunction phi = GridFunction::sample(g, [](double x) { return std::cos(std::numbers::pi * x / 2.0); });
    // Tiny t: exp(t psi) phi ~ phi + t L phi.
    const double t = 1e-6;
    const GridFunction out = spectral_reference(symbol_of(op), phi, t);
    const GridFunction lphi = op.apply(phi);
    for (std::size_t k = 0; k < g.size(); ++k) EXPECT_NEAR((out[k] - phi[k]) / t, lphi[k], 1e-5);
}

TEST(Spectral, CircularConvolutionMatchesDirectSum) {
    const GridSpec g = grid_1d(16, 2.0);
    std::vector<double> a(16), b(16);
    for (int i = 0; i < 16; ++i) a[i] = std::sin(i + 1.0), b[i] = std::cos(0.3 * i);
    const auto c = circular_convolution(g, a, b);
    for (int x = 0; x < 16; ++x) {
        double direct = 0.0;
        for (int y = 0; y < 16; ++y) direct += a[y] * b[(x - y + 16) % 16];
        EXPECT_NEAR(c[x], direct, 1e-12);
    }
}
