#include "alsr/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "alsr/edm_core.hpp"
#include "alsr/errors.hpp"

namespace alsr {

void RunConfig::validate() const {
    dataset.validate();
    if (batch_size == 0) {
        throw ContractViolation("batch_size must be positive");
    }
    adam.validate();
    alsr::validate(sampler);
    alsr::validate(weight);
    if (!(sigma_data > 0.0) || !std::isfinite(sigma_data)) {
        throw ContractViolation("sigma_data must be positive");
    }
    if (center_ema && !(center_ema_momentum >= 0.0 && center_ema_momentum < 1.0)) {
        throw ContractViolation("center_ema_momentum must be in [0, 1)");
    }
    telemetry.grid.validate();
    for (double f : telemetry.snapshot_fractions) {
        if (!(f > 0.0 && f <= 1.0)) {
            throw ContractViolation("snapshot fractions must lie in (0, 1]");
        }
    }
    if (eval.n_generated == 0 || eval.n_reference == 0 || eval.n_projections < 1) {
        throw ContractViolation("eval sample counts and projections must be positive");
    }
    eval.schedule.validate();
    MlpArchitecture arch = model;
    arch.data_dim = dataset_dim(dataset.variant);
    arch.validate();
}

StepRecord train_step(TrainState& state, const Eigen::MatrixXd& batch, const RunConfig& cfg, Rng& noise_rng,
                      BinnedStats* telemetry) {
    const Eigen::Index n = batch.cols();
    const Eigen::Index dim = batch.rows();
    if (n == 0) {
        throw ContractViolation("train_step: empty batch");
    }
    if (dim != state.model.architecture().data_dim) {
        throw ContractViolation("train_step: batch dimension does not match the model");
    }

    std::vector<NoiseScale> sigmas;
    sigmas.reserve(static_cast<std::size_t>(n));
    std::vector<PreconditionSet> coeffs;
    coeffs.reserve(static_cast<std::size_t>(n));
    std::vector<double> c_noise(static_cast<std::size_t>(n));
    std::vector<double> logsnr(static_cast<std::size_t>(n));
    Eigen::MatrixXd x_tilde(dim, n);
    Eigen::MatrixXd net_in(dim, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto k = static_cast<std::size_t>(j);
        sigmas.push_back(sample_noise_scale(cfg.sampler, noise_rng));
        for (Eigen::Index i = 0; i < dim; ++i) {
            x_tilde(i, j) = batch(i, j) + sigmas[k].value() * standard_normal(noise_rng);
        }
        coeffs.push_back(precondition(sigmas[k], cfg.sigma_data));
        net_in.col(j) = coeffs[k].c_in * x_tilde.col(j);
        c_noise[k] = noise_conditioning(sigmas[k]);
        logsnr[k] = sigma_to_logsnr(sigmas[k], cfg.sigma_data).value();
    }

    const ForwardCache cache = state.model.forward_cached(net_in, c_noise);
    const Eigen::MatrixXd& r = cache.output();

    double center = resolve_center(logsnr, cfg.weight);
    if (cfg.center_ema && std::holds_alternative<BatchMeanCenter>(cfg.weight.center_mode)) {
        const double m = cfg.center_ema_momentum;
        state.ema_center = state.ema_center ? m * *state.ema_center + (1.0 - m) * center : center;
        center = *state.ema_center;
    }
    const std::vector<double> w = batch_weights(logsnr, center, cfg.weight);

    const double inv_n = 1.0 / static_cast<double>(n);
    Eigen::MatrixXd upstream(dim, n);
    std::vector<double> plain(static_cast<std::size_t>(n));
    double sum_weighted = 0.0;
    double sum_plain = 0.0;
    double sum_w = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto k = static_cast<std::size_t>(j);
        const auto& c = coeffs[k];
        const Eigen::VectorXd residual = c.c_skip * x_tilde.col(j) + c.c_out * r.col(j) - batch.col(j);
        plain[k] = c.w_edm * residual.squaredNorm();
        const double coef = w[k] * c.w_edm;
        sum_weighted += w[k] * plain[k];
        sum_plain += plain[k];
        sum_w += w[k];
        upstream.col(j) = (2.0 * coef * c.c_out * inv_n) * residual;
    }

    StepRecord record{state.step + 1, sum_weighted * inv_n, sum_plain * inv_n, sum_w * inv_n};
    if (!std::isfinite(record.loss_weighted) || !std::isfinite(record.loss_unweighted)) {
        std::ostringstream diag;
        diag << "step " << record.step << "\nsigma,logsnr,w_snr,edm_loss\n";
        for (std::size_t k = 0; k < plain.size(); ++k) {
            diag << fmt::format("{:.12g},{:.12g},{:.12g},{:.12g}\n", sigmas[k].value(), logsnr[k], w[k], plain[k]);
        }
        throw TrainingDiverged(fmt::format("non-finite loss at step {}", record.step), diag.str());
    }

    const Eigen::VectorXd grad = state.model.backward(cache, upstream);
    adam_update(state.model.mutable_parameters(), grad, state.adam, cfg.adam);
    state.step = record.step;

    if (telemetry != nullptr) {
        for (std::size_t k = 0; k < plain.size(); ++k) {
            telemetry->record(logsnr[k], cfg.telemetry.record_weighted_loss ? w[k] * plain[k] : plain[k]);
        }
    }
    return record;
}

std::vector<std::uint64_t> snapshot_steps(const RunConfig& cfg) {
    std::vector<std::uint64_t> out;
    for (double f : cfg.telemetry.snapshot_fractions) {
        out.push_back(static_cast<std::uint64_t>(std::ceil(f * static_cast<double>(cfg.steps) - 1e-9)));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::uint64_t> eval_steps(const RunConfig& cfg) {
    std::vector<std::uint64_t> out;
    if (cfg.eval.every > 0) {
        for (std::uint64_t s = 0; s < cfg.steps; s += cfg.eval.every) {
            out.push_back(s);
        }
    }
    out.push_back(cfg.steps);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Eigen::MatrixXd reference_samples(const RunConfig& cfg) {
    Rng rng = substream(cfg.seed, "reference");
    return sample_dataset(cfg.dataset.variant, cfg.eval.n_reference, rng);
}

MetricReport evaluate_model(const MlpDenoiser& model, const RunConfig& cfg, const Eigen::MatrixXd& reference,
                            std::uint64_t eval_seed) {
    Rng rng = substream(eval_seed, "ode");
    const Eigen::MatrixXd generated = ode_sample(make_model_denoiser(model, cfg.sigma_data), cfg.eval.schedule,
                                                 cfg.eval.n_generated, model.architecture().data_dim, rng);
    return evaluate_samples(generated, reference, cfg.eval.n_projections, eval_seed);
}

RunReport run_training(const RunConfig& cfg, const ProgressFn& progress) {
    cfg.validate();

    Rng data_rng = substream(cfg.seed, "data");
    const Eigen::MatrixXd data = generate_dataset(cfg.dataset, data_rng);
    const Eigen::MatrixXd reference = reference_samples(cfg);

    MlpArchitecture arch = cfg.model;
    arch.data_dim = dataset_dim(cfg.dataset.variant);
    Rng init_rng = substream(cfg.seed, "init");
    TrainState state(MlpDenoiser::initialized(arch, init_rng));

    Rng noise_rng = substream(cfg.seed, "noise");
    Rng batch_rng = substream(cfg.seed, "batch");
    std::uniform_int_distribution<Eigen::Index> pick(0, data.cols() - 1);

    BinnedStats stats(cfg.telemetry.grid);
    const auto snaps = snapshot_steps(cfg);
    const auto evals = eval_steps(cfg);
    auto next_snap = snaps.begin();
    auto next_eval = evals.begin();

    RunReport report{cfg, {}, {}, {}, {}, state.model, 0};
    report.curve.reserve(cfg.steps);

    auto checkpoints = [&](std::uint64_t step) {
        while (next_snap != snaps.end() && *next_snap == step) {
            report.snapshots.push_back(snapshot(stats, step));
            ++next_snap;
        }
        if (next_eval != evals.end() && *next_eval == step) {
            report.evals.push_back(
                EvalPoint{step, evaluate_model(state.model, cfg, reference, derive_seed(cfg.seed, "eval", step))});
            ++next_eval;
        }
    };

    checkpoints(0);
    Eigen::MatrixXd batch(data.rows(), static_cast<Eigen::Index>(cfg.batch_size));
    for (std::uint64_t s = 0; s < cfg.steps; ++s) {
        for (Eigen::Index j = 0; j < batch.cols(); ++j) {
            batch.col(j) = data.col(pick(batch_rng));
        }
        const StepRecord rec = train_step(state, batch, cfg, noise_rng, &stats);
        report.curve.push_back(rec);
        if (progress) {
            progress(rec);
        }
        checkpoints(rec.step);
    }

    report.final_metrics = report.evals.back().metrics;
    report.model = state.model;
    return report;
}

double leading_loss_mean(const TrainingCurve& curve, double fraction) {
    const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(fraction * static_cast<double>(curve.size())));
    if (curve.empty()) {
        throw InsufficientData("empty training curve");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        total += curve[i].loss_weighted;
    }
    return total / static_cast<double>(n);
}

double trailing_loss_mean(const TrainingCurve& curve, double fraction) {
    const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(fraction * static_cast<double>(curve.size())));
    if (curve.empty()) {
        throw InsufficientData("empty training curve");
    }
    double total = 0.0;
    for (std::size_t i = curve.size() - n; i < curve.size(); ++i) {
        total += curve[i].loss_weighted;
    }
    return total / static_cast<double>(n);
}

}  // namespace alsr
