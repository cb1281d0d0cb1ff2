#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "tcmfg/error.hpp"
#include "tcmfg/fp.hpp"
#include "tcmfg/lyapunov.hpp"
#include "tcmfg/metric.hpp"
#include "tcmfg/spectral.hpp"

using namespace tcmfg;

namespace {
GridSpec grid_1d(std::size_t points = 128, std::size_t steps = 40) {
    GridSpec g;
    g.points = points;
    g.half_width = 4.0;
    g.horizon = 1.0;
    g.steps = steps;
    return g;
}

DiscreteLevyOp stable_op(const GridSpec& g) {
    return build_epsilon_approx(pure_jump(1, LevyMeasureSpec::stable(0.3, 1.0)), 0.2, g);
}

ControlField varying_control(const GridSpec& g) {
    ControlField b;
    b.grid = g;
    for (std::size_t n = 0; n <= g.steps; ++n)
        b.b.push_back(GridFunction::sample(g, [&](double x) { return 1.0 + 0.8 * std::sin(x + g.time(n)); }));
    b.min = 0.2;
    b.max = 1.8;
    return b;
}

double pairing(const ProbabilityVector& m, const GridFunction& w) { return m.integrate(w); }
} // namespace

TEST(SolveFp, ZeroControlFreezesTheMeasure) {
    const GridSpec g = grid_1d();
    const auto m0 = ProbabilityVector::gaussian(g, {0.3, 0.0}, 0.5);
    const MeasureTrajectory m = solve_fp(m0, constant_control(g, 0.0), stable_op(g));
    for (const auto& slice : m.m)
        for (std::size_t k = 0; k < g.size(); ++k) ASSERT_EQ(slice[k], m0[k]);
}

TEST(SolveFp, UnitControlFollowsTheSpectralOracle) {
    const double eps = 0.1;
    std::vector<double> errors;
    for (std::size_t steps : {100, 200}) {
        const GridSpec g = grid_1d(256, steps);
        const LevyTriplet t = pure_jump(1, LevyMeasureSpec::stable(0.25, 1.0));
        const DiscreteLevyOp op = build_epsilon_approx(t, eps, g);
        const auto m0 = ProbabilityVector::gaussian(g, {0.0, 0.0}, 0.5);
        const MeasureTrajectory m = solve_fp(m0, constant_control(g, 1.0), op);
        const GridFunction start(g, std::vector<double>(m0.masses().begin(), m0.masses().end()));
        const GridFunction ref = spectral_reference(t, start, g.horizon, true);
        double l1 = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) l1 += std::abs(m.m.back()[k] - ref[k]);
        errors.push_back(l1);
        EXPECT_LE(l1, g.dt() + g.spacing() + eps);
    }
    EXPECT_GE(errors[0] / errors[1], 1.8);
}

TEST(SolveFp, MassAndPositivity) {
    const GridSpec g = grid_1d();
    const MeasureTrajectory m = solve_fp(ProbabilityVector::dirac(g, 17), varying_control(g), stable_op(g));
    for (const auto& slice : m.m) {
        EXPECT_LE(std::abs(slice.total() - 1.0), 1e-12 * g.steps);
        EXPECT_GE(slice.min(), -1e-14);
    }
    EXPECT_LE(m.max_mass_drift, 1e-12 * g.steps);
    for (const auto& row : mass_report(m)) EXPECT_TRUE(row.pass);
}

TEST(SolveFp, SubstepCapRaisesCflViolation) {
    const GridSpec g = grid_1d();
    FpOptions opts;
    opts.max_substeps = 1;
    EXPECT_THROW(solve_fp(ProbabilityVector::uniform(g), constant_control(g, 50.0), stable_op(g), opts), CflViolation);
    EXPECT_GE(fp_substeps(GridFunction(g, 50.0), stable_op(g), g.dt(), 1), 2u);
}

TEST(SolveDual, ConstantsAndMaximumPrinciple) {
    const GridSpec g = grid_1d();
    const DiscreteLevyOp op = stable_op(g);
    const ControlField b = varying_control(g);
    const DualTrajectory one = solve_dual(GridFunction(g, 1.0), b, op, g.steps);
    for (const auto& slice : one.w)
        for (std::size_t k = 0; k < g.size(); ++k) ASSERT_NEAR(slice[k], 1.0, 1e-14);
    const GridFunction phi = GridFunction::sample(g, [](double x) { return std::tanh(x); });
    const DualTrajectory w = solve_dual(phi, b, op, g.steps);
    for (const auto& slice : w.w) {
        EXPECT_GE(slice.min(), phi.min() - 1e-15);
        EXPECT_LE(slice.max(), phi.max() + 1e-15);
    }
}

TEST(SolveDual, UnitControlFollowsTheSpectralOracle) {
    const GridSpec g = grid_1d(256, 200);
    const LevyTriplet t = pure_jump(1, LevyMeasureSpec::stable(0.25, 1.0));
    const DiscreteLevyOp op = build_epsilon_approx(t, 0.1, g);
    const GridFunction phi = GridFunction::sample(g, [](double x) { return std::exp(-x * x); });
    const DualTrajectory w = solve_dual(phi, constant_control(g, 1.0), op, g.steps);
    const GridFunction ref = spectral_reference(symbol_of(op), phi, g.horizon);
    double err = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) err = std::max(err, std::abs(w.w[0][k] - ref[k]));
    EXPECT_LE(err, 2.0 * g.dt());
}

TEST(SolveDual, PairingIsPreservedStepByStep) {
    const GridSpec g = grid_1d();
    const DiscreteLevyOp op = stable_op(g);
    const ControlField b = varying_control(g);
    const MeasureTrajectory m = solve_fp(ProbabilityVector::gaussian(g, {1.0, 0.0}, 0.3), b, op);
    const GridFunction phi = GridFunction::sample(g, [](double x) { return std::cos(x); });
    const DualTrajectory w = solve_dual(phi, b, op, g.steps);
    for (std::size_t n = 0; n < g.steps; ++n)
        EXPECT_NEAR(pairing(m.m[n + 1], w.w[n + 1]), pairing(m.m[n], w.w[n]), 1e-14);
}

TEST(Holmgren, IdenticalFlowsGiveZeroAndDistinctStartsAreDetected) {
    const GridSpec g = grid_1d();
    const DiscreteLevyOp op = stable_op(g);
    const ControlField b = constant_control(g, 1.0);
    const std::vector<GridFunction> family{GridFunction::sample(g, [](double x) { return std::sin(x); }),
                                           GridFunction::sample(g, [](double x) { return std::exp(-x * x); })};
    const MeasureTrajectory a = solve_fp(ProbabilityVector::dirac(g, 40), b, op);
    const HolmgrenResult same = holmgren_residual(a, a, b, op, family, g.steps);
    for (double r : same.residual) EXPECT_EQ(r, 0.0);
    const MeasureTrajectory c = solve_fp(ProbabilityVector::dirac(g, 80), b, op);
    const HolmgrenResult diff = holmgren_residual(a, c, b, op, family, g.steps);
    for (std::size_t i = 0; i < family.size(); ++i) {
        double direct = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) direct += (a.m.back()[k] - c.m.back()[k]) * family[i][k];
        EXPECT_NEAR(diff.residual[i], std::abs(direct), 1e-14);
        EXPECT_GT(diff.residual[i], 1e-3);
    }
}

TEST(Holmgren, SubstepRefinementIsFirstOrder) {
    const GridSpec g = grid_1d();
    const DiscreteLevyOp op = stable_op(g);
    const ControlField b = varying_control(g);
    FpOptions fine;
    fine.min_substeps = 2;
    const auto m0 = ProbabilityVector::gaussian(g, {0.0, 0.0}, 0.4);
    const MeasureTrajectory a = solve_fp(m0, b, op), c = solve_fp(m0, b, op, fine);
    const std::vector<GridFunction> family{GridFunction::sample(g, [](double x) { return std::cos(x); })};
    const HolmgrenResult h = holmgren_residual(a, c, b, op, family, g.steps);
    EXPECT_GT(h.residual[0], 0.0);
    EXPECT_LE(h.residual[0], g.dt());
}

TEST(Tightness, LyapunovMomentGrowsAtMostLinearly) {
    const GridSpec g = grid_1d();
    const DiscreteLevyOp op = stable_op(g);
    const ControlField b = varying_control(g);
    const MeasureTrajectory m = solve_fp(ProbabilityVector::gaussian(g, {0.0, 0.0}, 0.5), b, op);
    for (const auto& row : tightness_report(m, b, op, default_log_lyapunov(), 1e-12)) EXPECT_TRUE(row.pass) << row.slice;
}

TEST(Equicontinuity, TimeIncrementsInTheRkNorm) {
    const GridSpec g = grid_1d(128, 40);
    const DiscreteLevyOp op = stable_op(g);
    const ControlField b = varying_control(g);
    const MeasureTrajectory m = solve_fp(ProbabilityVector::dirac(g, 64), b, op);
    const double constant = 2.0 + (2.0 * std::sqrt(g.horizon) + sphere_measure(1)) * b.max * op.lk();
    for (std::size_t s = 0; s <= g.steps; s += 5)
        for (std::size_t t = s + 1; t <= g.steps; t += 7)
            EXPECT_LE(d0_distance(m.m[t], m.m[s]), constant * std::sqrt(g.time(t) - g.time(s)) + 1e-12);
}
