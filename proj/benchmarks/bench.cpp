// Microbenchmarks for the hot paths: kernel density queries, full band
// construction, and the O(n^2) good-event scan.

#include <benchmark/benchmark.h>

#include "scoreband/band.hpp"
#include "scoreband/concentration.hpp"
#include "scoreband/densities.hpp"
#include "scoreband/sample.hpp"

namespace {

scoreband::Sample make_sample(std::size_t n) {
    auto model = scoreband::make_gaussian();
    return scoreband::Sample(scoreband::sample(*model, n, 12345));
}

void bm_kde_query(benchmark::State& state) {
    scoreband::Sample data = make_sample(static_cast<std::size_t>(state.range(0)));
    double h = data.range() / 8.0;
    double x = data.min();
    double step = data.range() / 1024.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(data.kde_tri(h, x));
        benchmark::DoNotOptimize(data.kde_tri_deriv(h, x));
        x += step;
        if (x > data.max()) x = data.min();
    }
}
BENCHMARK(bm_kde_query)->Arg(1 << 10)->Arg(1 << 14);

void bm_band_construction(benchmark::State& state) {
    scoreband::Sample data = make_sample(static_cast<std::size_t>(state.range(0)));
    scoreband::GridSpec grid = scoreband::default_grid(data);
    for (auto _ : state) {
        benchmark::DoNotOptimize(scoreband::multiscale_band(data, 0.1, grid));
    }
}
BENCHMARK(bm_band_construction)->Arg(1 << 9)->Arg(1 << 12)->Unit(benchmark::kMillisecond);

void bm_goodevent_stat(benchmark::State& state) {
    scoreband::Sample data = make_sample(static_cast<std::size_t>(state.range(0)));
    auto model = scoreband::make_gaussian();
    for (auto _ : state) {
        benchmark::DoNotOptimize(scoreband::goodevent_stat(data, *model, 0.1));
    }
}
BENCHMARK(bm_goodevent_stat)->Arg(1 << 7)->Arg(1 << 9)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
