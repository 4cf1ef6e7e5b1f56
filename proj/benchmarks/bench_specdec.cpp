#include <benchmark/benchmark.h>

#include <vector>

#include "specdec/detail/rng.hpp"
#include "specdec/flows.hpp"
#include "specdec/functionals.hpp"
#include "specdec/oracles.hpp"
#include "specdec/signal.hpp"
#include "specdec/spectral.hpp"
#include "specdec/time_grid.hpp"
#include "specdec/transforms.hpp"

namespace {

using namespace specdec;

Signal random_signal(std::size_t n, std::uint64_t seed) {
    detail::Rng rng(seed);
    std::vector<double> v(n);
    for (double& x : v) x = rng.normal();
    return Signal(std::move(v));
}

Signal random_image(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    detail::Rng rng(seed);
    std::vector<double> v(rows * cols);
    for (double& x : v) x = rng.normal();
    return Signal(std::move(v), rows, cols);
}

void BM_tv1d_prox(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Signal f = random_signal(n, 42);
    const FunctionalSpec J = FunctionalSpec::tv1d();
    for (auto _ : state) {
        benchmark::DoNotOptimize(prox(J, f, 0.5).u);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_tv1d_prox)->RangeMultiplier(8)->Range(1 << 10, 1 << 19)->Complexity();

void BM_dct_roundtrip(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Signal f = random_signal(n, 7);
    const auto V = dct_transform();
    for (auto _ : state) {
        benchmark::DoNotOptimize(V->inverse(V->forward(f), f));
    }
}
BENCHMARK(BM_dct_roundtrip)->Arg(1 << 10)->Arg(1 << 14);

void BM_tv2d_prox(benchmark::State& state) {
    const auto side = static_cast<std::size_t>(state.range(0));
    const Signal f = random_image(side, side, 11);
    const FunctionalSpec J = FunctionalSpec::tv2d_iso();
    SolverOptions opts;
    opts.tol = 1e-6;
    opts.max_iterations = 200000;
    for (auto _ : state) {
        benchmark::DoNotOptimize(prox(J, f, 0.3, opts).u);
    }
}
BENCHMARK(BM_tv2d_prox)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_tgv2_prox(benchmark::State& state) {
    const Signal f = random_signal(64, 3);
    const FunctionalSpec J = FunctionalSpec::tgv2(0.3);
    SolverOptions opts;
    opts.tol = 1e-4;
    opts.max_iterations = 1000000;
    for (auto _ : state) {
        benchmark::DoNotOptimize(prox(J, f, 0.5, opts).u);
    }
}
BENCHMARK(BM_tgv2_prox)->Unit(benchmark::kMillisecond);

void BM_gradient_flow_path(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Signal f = random_signal(n, 5);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += f[i] / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) f[i] -= mean;
    const FunctionalSpec J = FunctionalSpec::tv1d();
    const TimeGrid grid = TimeGrid::uniform(0.0, 30.0, 50);
    for (auto _ : state) {
        const ScalePath path = run_gradient_flow(f, J, grid);
        benchmark::DoNotOptimize(wavelength_bands(path).bands.size());
    }
}
BENCHMARK(BM_gradient_flow_path)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_inverse_scale_space_dct(benchmark::State& state) {
    const Signal f = random_signal(256, 9);
    const FunctionalSpec J = FunctionalSpec::l1_analysis(dct_transform());
    const TimeGrid grid = TimeGrid::uniform(0.0, 4.0, 40);
    for (auto _ : state) {
        const ScalePath path = run_inverse_scale_space(f, J, grid);
        benchmark::DoNotOptimize(frequency_bands(path).bands.size());
    }
}
BENCHMARK(BM_inverse_scale_space_dct)->Unit(benchmark::kMillisecond);

void BM_collab_prox(benchmark::State& state) {
    const Signal f = random_image(64, 16, 13);
    const FunctionalSpec J = FunctionalSpec::collab_linf1();
    for (auto _ : state) {
        benchmark::DoNotOptimize(prox(J, f, 0.4).u);
    }
}
BENCHMARK(BM_collab_prox);

} // namespace

BENCHMARK_MAIN();
