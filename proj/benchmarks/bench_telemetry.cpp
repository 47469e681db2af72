#include <benchmark/benchmark.h>

#include <random>

#include "alsr/telemetry.hpp"

namespace {

void BM_TelemetryRecord(benchmark::State& state) {
    alsr::BinnedStats stats;
    std::mt19937_64 rng(11);
    std::normal_distribution<double> lambda(0.0, 3.0);
    std::exponential_distribution<double> loss(1.0);
    for (auto _ : state) {
        stats.record(lambda(rng), loss(rng));
    }
    benchmark::DoNotOptimize(stats.total_recorded());
}

}  // namespace

BENCHMARK(BM_TelemetryRecord);
