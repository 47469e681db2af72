#include <benchmark/benchmark.h>

#include "alsr/metrics.hpp"

namespace {

void BM_EnergyDistance(benchmark::State& state) {
    const auto n = state.range(0);
    const Eigen::MatrixXd a = Eigen::MatrixXd::Random(2, n);
    const Eigen::MatrixXd b = Eigen::MatrixXd::Random(2, n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(alsr::energy_distance(a, b, 7));
    }
}

void BM_SlicedWasserstein(benchmark::State& state) {
    const auto n = state.range(0);
    const Eigen::MatrixXd a = Eigen::MatrixXd::Random(2, n);
    const Eigen::MatrixXd b = Eigen::MatrixXd::Random(2, n);
    for (auto _ : state) {
        alsr::Rng rng(5);
        benchmark::DoNotOptimize(alsr::sliced_wasserstein(a, b, 64, rng));
    }
}

}  // namespace

BENCHMARK(BM_EnergyDistance)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SlicedWasserstein)->Arg(10000)->Unit(benchmark::kMillisecond);
