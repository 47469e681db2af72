#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "alsr/adam.hpp"
#include "alsr/adaptive_weight.hpp"
#include "alsr/checkpoint.hpp"
#include "alsr/datasets.hpp"
#include "alsr/denoiser_model.hpp"
#include "alsr/metrics.hpp"
#include "alsr/ode_sampler.hpp"
#include "alsr/snr_domain.hpp"
#include "alsr/telemetry.hpp"

namespace alsr {

struct TelemetryConfig {
    BinGrid grid;
    /// Snapshot points as fractions of the total step count, each in (0, 1].
    std::vector<double> snapshot_fractions = {1.0 / 6.0, 0.5, 1.0};
    /// Record w_SNR-weighted losses instead of the plain EDM loss.
    bool record_weighted_loss = false;
};

struct EvalConfig {
    /// Evaluate at step 0 and every `every` steps; 0 evaluates the final state only.
    std::uint64_t every = 0;
    std::size_t n_generated = 10000;
    std::size_t n_reference = 10000;
    SigmaSchedule schedule;
    int n_projections = 64;
};

struct RunConfig {
    DatasetSpec dataset;
    std::uint64_t steps = 6000;
    std::size_t batch_size = 128;
    AdamHyper adam;
    std::uint64_t seed = 0;
    SamplerSpec sampler = LogNormal{};
    WeightConfig weight;
    /// Exponential moving average of the batch center (BatchMean mode only).
    bool center_ema = false;
    double center_ema_momentum = 0.99;
    double sigma_data = 0.5;
    MlpArchitecture model;
    TelemetryConfig telemetry;
    EvalConfig eval;
    CheckpointFormat checkpoint_format = CheckpointFormat::Binary;

    /// Throws ContractViolation / DomainError on any invalid field.
    void validate() const;
};

struct StepRecord {
    std::uint64_t step;
    double loss_weighted;    ///< batch mean of w_SNR * w_EDM * ||D - x||^2
    double loss_unweighted;  ///< batch mean of w_EDM * ||D - x||^2
    double mean_weight;      ///< batch mean of w_SNR
};

using TrainingCurve = std::vector<StepRecord>;

struct TrainState {
    MlpDenoiser model;
    AdamState adam;
    std::optional<double> ema_center;
    std::uint64_t step = 0;

    explicit TrainState(MlpDenoiser m) : model(std::move(m)), adam(model.parameter_count()) {}
};

/// One ALSR step on a batch (columns are clean samples): draw sigma and eps per
/// sample from noise_rng, precondition, denoise, weight by w_EDM * w_SNR, mean-reduce,
/// backpropagate and apply Adam. Per-sample losses go to `telemetry` when given.
/// Throws TrainingDiverged if the batch loss is not finite.
StepRecord train_step(TrainState& state, const Eigen::MatrixXd& batch, const RunConfig& cfg, Rng& noise_rng,
                      BinnedStats* telemetry = nullptr);

struct EvalPoint {
    std::uint64_t step;
    MetricReport metrics;
};

struct RunReport {
    RunConfig config;
    TrainingCurve curve;
    std::vector<EvalPoint> evals;
    std::vector<StageSnapshot> snapshots;
    MetricReport final_metrics;
    MlpDenoiser model;
    std::uint64_t non_finite_events = 0;
};

/// Steps at which snapshots are taken: ceil(fraction * steps), deduplicated and sorted.
std::vector<std::uint64_t> snapshot_steps(const RunConfig& cfg);
/// Steps at which generation metrics are computed.
std::vector<std::uint64_t> eval_steps(const RunConfig& cfg);

/// Generation metrics for a model against a reference sample; randomness from `eval_seed`.
MetricReport evaluate_model(const MlpDenoiser& model, const RunConfig& cfg, const Eigen::MatrixXd& reference,
                            std::uint64_t eval_seed);

/// Held-out reference sample for a config ("reference" substream of the root seed).
Eigen::MatrixXd reference_samples(const RunConfig& cfg);

using ProgressFn = std::function<void(const StepRecord&)>;

RunReport run_training(const RunConfig& cfg, const ProgressFn& progress = {});

/// Mean of the optimized (weighted) batch loss over the first / last `fraction` of the curve.
double leading_loss_mean(const TrainingCurve& curve, double fraction = 0.1);
double trailing_loss_mean(const TrainingCurve& curve, double fraction = 0.1);

}  // namespace alsr
