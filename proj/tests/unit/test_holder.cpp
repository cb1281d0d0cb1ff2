#include <algorithm>
#include <gtest/gtest.h>

#include <cmath>

#include "tcmfg/holder.hpp"

using namespace tcmfg;

namespace {
GridSpec grid_1d(std::size_t points, double half_width) {
    GridSpec g;
    g.points = points;
    g.half_width = half_width;
    return g;
}
} // namespace

TEST(HolderSeminorm, ConstantIsZero) {
    const GridSpec g = grid_1d(64, 2.0);
    EXPECT_EQ(holder_seminorm(GridFunction(g, 4.2), 0.5), 0.0);
    EXPECT_DOUBLE_EQ(holder_norm(GridFunction(g, -4.2), 0.5), 4.2);
}

TEST(HolderSeminorm, IdentityHasLipschitzConstantOne) {
    // Periodic tent: up on [0, 1], flat, down on [2, 3].
    const GridSpec g = grid_1d(256, 4.0);
    const GridFunction phi =
        GridFunction::sample(g, [](double x) { return std::clamp(x, 0.0, 1.0) - std::clamp(x - 2.0, 0.0, 1.0); });
    EXPECT_NEAR(holder_seminorm(phi, 1.0), 1.0, 1e-12);
}

TEST(HolderSeminorm, SquareRootAtHalf) {
    const GridSpec g = grid_1d(1024, 1.0);
    const GridFunction phi = GridFunction::sample(g, [](double x) { return std::sqrt(std::abs(x)); });
    // Brute force over every pair inside the window.
    double brute = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = i + 1; j < g.size(); ++j) {
            const double d = (j - i) * g.spacing();
            const double wrapped = std::min(d, g.period() - d);
            if (wrapped <= 1.0) brute = std::max(brute, std::abs(phi[i] - phi[j]) / std::pow(wrapped, 0.5));
        }
    const double s = holder_seminorm(phi, 0.5);
    EXPECT_NEAR(s, brute, 1e-12);
    EXPECT_NEAR(s, 1.0, 0.02);
}

TEST(HolderSeminorm, TwoDimensionalPlane) {
    GridSpec g = grid_1d(64, 4.0);
    g.dim = 2;
    // Periodic ramp with slope 1 on [-1, 1] and -1 on [2, 4].
    const auto ramp = [](double x) { return x <= 2.0 ? std::clamp(x, -1.0, 1.0) : 3.0 - x; };
    const GridFunction phi = GridFunction::sample(g, [&](double x, double y) { return 0.6 * ramp(x) + 0.8 * ramp(y); });
    EXPECT_NEAR(holder_seminorm(phi, 1.0), 1.0, 1e-12);
}
