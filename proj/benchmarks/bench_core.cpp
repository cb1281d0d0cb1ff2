#include <benchmark/benchmark.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "tcmfg/coupling.hpp"
#include "tcmfg/hjb.hpp"
#include "tcmfg/metric.hpp"
#include "tcmfg/spectral.hpp"
#include "tcmfg/stencil.hpp"

using namespace tcmfg;

namespace {

GridSpec grid_of(int dim, std::size_t points) {
    GridSpec g;
    g.dim = dim;
    g.points = points;
    g.half_width = 4.0;
    g.horizon = 1.0;
    g.steps = 100;
    return g;
}

DiscreteLevyOp stable_op(const GridSpec& g) {
    const LevyMeasureSpec nu = g.dim == 1 ? LevyMeasureSpec::stable(0.25, 1.0) : LevyMeasureSpec::fractional_laplacian(2, 0.25);
    return build_epsilon_approx(pure_jump(g.dim, nu), std::max(0.1, 2.0 * g.spacing()), g);
}

ProbabilityVector random_measure(const GridSpec& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> w(g.size());
    double total = 0.0;
    for (double& v : w) total += (v = unit(rng));
    for (double& v : w) v /= total;
    return ProbabilityVector::unchecked(g, std::move(w));
}

void StencilApply(benchmark::State& state) {
    const GridSpec g = grid_of(static_cast<int>(state.range(0)), static_cast<std::size_t>(state.range(1)));
    const DiscreteLevyOp op = stable_op(g);
    const GridFunction phi = GridFunction::sample(g, [](double x, double y) { return std::sin(x) * std::cos(y); });
    GridFunction out(g);
    for (auto _ : state) {
        op.apply(phi.values(), out.values());
        benchmark::DoNotOptimize(out.values().data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * g.size()));
    state.counters["stencil_size"] = static_cast<double>(op.entries().size());
}
BENCHMARK(StencilApply)->Args({1, 256})->Args({1, 4096})->Args({2, 64})->Args({2, 128});

void FftConvolution(benchmark::State& state) {
    const GridSpec g = grid_of(static_cast<int>(state.range(0)), static_cast<std::size_t>(state.range(1)));
    const Coupling c(g, 0.5, 1.0);
    const ProbabilityVector m = random_measure(g, 1);
    for (auto _ : state) benchmark::DoNotOptimize(c(m));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * g.size()));
}
BENCHMARK(FftConvolution)->Args({1, 256})->Args({1, 4096})->Args({2, 128});

void D0Distance(benchmark::State& state) {
    const GridSpec g = grid_of(1, static_cast<std::size_t>(state.range(0)));
    const ProbabilityVector a = random_measure(g, 2), b = random_measure(g, 3);
    for (auto _ : state) benchmark::DoNotOptimize(d0_distance(a, b));
}
BENCHMARK(D0Distance)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void HjbSolve(benchmark::State& state) {
    const GridSpec g = grid_of(1, static_cast<std::size_t>(state.range(0)));
    const DiscreteLevyOp op = stable_op(g);
    const Hamiltonian quadratic = closed_form(GainFunction::power(2.0));
    const GridFunction terminal = GridFunction::sample(g, [](double x) { return 0.5 * std::sin(x * std::numbers::pi / 4.0); });
    for (auto _ : state) benchmark::DoNotOptimize(solve_hjb(terminal, {}, quadratic, op));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * g.steps));
}
BENCHMARK(HjbSolve)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
