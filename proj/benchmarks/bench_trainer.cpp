#include <benchmark/benchmark.h>

#include "alsr/trainer.hpp"

namespace {

void BM_TrainStep(benchmark::State& state) {
    alsr::RunConfig cfg;
    alsr::Rng init(1);
    alsr::TrainState train(alsr::MlpDenoiser::initialized(cfg.model, init));
    alsr::Rng data_rng(2);
    const Eigen::MatrixXd batch = alsr::sample_dataset(alsr::GaussianIso{}, cfg.batch_size, data_rng);
    alsr::Rng noise(3);
    alsr::BinnedStats stats(cfg.telemetry.grid);
    for (auto _ : state) {
        auto rec = alsr::train_step(train, batch, cfg, noise, &stats);
        benchmark::DoNotOptimize(rec.loss_weighted);
    }
}

}  // namespace

BENCHMARK(BM_TrainStep)->Unit(benchmark::kMicrosecond);
