#include <benchmark/benchmark.h>

#include <vector>

#include "alsr/denoiser_model.hpp"
#include "alsr/ode_sampler.hpp"

namespace {

alsr::MlpDenoiser make_model() {
    alsr::Rng rng(1);
    return alsr::MlpDenoiser::initialized(alsr::MlpArchitecture{}, rng);
}

void BM_ForwardBatch(benchmark::State& state) {
    const auto model = make_model();
    const auto n = state.range(0);
    alsr::Rng rng(2);
    Eigen::MatrixXd x = Eigen::MatrixXd::Random(2, n);
    std::vector<double> c(static_cast<std::size_t>(n), 0.1);
    for (auto _ : state) {
        auto out = model.forward_batch(x, c);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * n);
}

void BM_ForwardBackward(benchmark::State& state) {
    auto model = make_model();
    const auto n = state.range(0);
    Eigen::MatrixXd x = Eigen::MatrixXd::Random(2, n);
    Eigen::MatrixXd up = Eigen::MatrixXd::Random(2, n);
    std::vector<double> c(static_cast<std::size_t>(n), -0.3);
    for (auto _ : state) {
        const auto cache = model.forward_cached(x, c);
        auto grad = model.backward(cache, up);
        benchmark::DoNotOptimize(grad.data());
    }
    state.SetItemsProcessed(state.iterations() * n);
}

void BM_OdeSample(benchmark::State& state) {
    const auto model = make_model();
    const auto denoiser = alsr::make_model_denoiser(model, 0.5);
    alsr::SigmaSchedule schedule;
    for (auto _ : state) {
        alsr::Rng rng(3);
        auto out = alsr::ode_sample(denoiser, schedule, static_cast<std::size_t>(state.range(0)), 2, rng);
        benchmark::DoNotOptimize(out.data());
    }
}

}  // namespace

BENCHMARK(BM_ForwardBatch)->Arg(128)->Arg(2048);
BENCHMARK(BM_ForwardBackward)->Arg(128);
BENCHMARK(BM_OdeSample)->Arg(1000)->Unit(benchmark::kMillisecond);
