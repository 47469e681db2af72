#include "alsr/run_io.hpp"

#include <sstream>

#include "alsr/errors.hpp"
#include "alsr/text_format.hpp"

namespace alsr {

std::string curve_csv(const TrainingCurve& curve) {
    std::ostringstream out;
    out << kCurveHeader << '\n';
    for (const auto& r : curve) {
        out << r.step << ',' << format_real(r.loss_weighted) << ',' << format_real(r.loss_unweighted) << ','
            << format_real(r.mean_weight) << '\n';
    }
    return out.str();
}

std::string eval_curve_csv(std::span<const EvalPoint> evals) {
    std::ostringstream out;
    out << kEvalCurveHeader << '\n';
    for (const auto& e : evals) {
        out << e.step << ',' << format_real(e.metrics.energy_distance) << ','
            << format_real(e.metrics.sliced_wasserstein) << '\n';
    }
    return out.str();
}

nlohmann::ordered_json metrics_json(const MetricReport& m) {
    return {{"energy_distance", m.energy_distance},
            {"sliced_wasserstein", m.sliced_wasserstein},
            {"n_generated", m.n_generated},
            {"n_reference", m.n_reference},
            {"seed", m.seed}};
}

nlohmann::ordered_json run_metrics_json(const RunReport& report) {
    const auto& cfg = report.config;
    nlohmann::ordered_json j;
    j["metric_note"] = kMetricNote;
    j["seed"] = cfg.seed;
    j["alpha"] = cfg.weight.alpha;
    j["kernel"] = std::string(to_string(cfg.weight.kernel));
    j["center_mode"] = std::holds_alternative<FixedCenter>(cfg.weight.center_mode) ? "fixed" : "batch_mean";
    j["sampler"] = std::holds_alternative<LogNormal>(cfg.sampler) ? "lognormal" : "loguniform";
    j["steps"] = cfg.steps;
    j["batch_size"] = cfg.batch_size;
    j["final"] = metrics_json(report.final_metrics);
    j["final"]["step"] = report.evals.empty() ? 0 : report.evals.back().step;
    j["evals"] = nlohmann::ordered_json::array();
    for (const auto& e : report.evals) {
        auto entry = metrics_json(e.metrics);
        entry["step"] = e.step;
        j["evals"].push_back(entry);
    }
    j["variance_concentration"] = nlohmann::ordered_json::array();
    for (const auto& snap : report.snapshots) {
        nlohmann::ordered_json entry{{"step", snap.step}};
        try {
            entry["value"] = variance_concentration(snap.stats);
        } catch (const InsufficientData&) {
            entry["value"] = nullptr;
        }
        j["variance_concentration"].push_back(entry);
    }
    if (report.curve.empty()) {
        j["loss"] = {{"leading_10pct_mean", nullptr}, {"trailing_10pct_mean", nullptr}};
    } else {
        j["loss"] = {{"leading_10pct_mean", leading_loss_mean(report.curve)},
                     {"trailing_10pct_mean", trailing_loss_mean(report.curve)}};
    }
    j["non_finite_events"] = report.non_finite_events;
    return j;
}

std::string checkpoint_file_name(CheckpointFormat format) {
    return format == CheckpointFormat::Binary ? "model.ckpt" : "model.json";
}

void write_run_outputs(const RunReport& report, const std::filesystem::path& dir,
                       const std::optional<AblationSpec>& ablation) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create " + dir.string() + ": " + ec.message());
    }
    write_file(dir / "curve.csv", curve_csv(report.curve));
    write_file(dir / "eval_curve.csv", eval_curve_csv(report.evals));
    export_heatmap(report.snapshots, dir / "heatmap.csv");
    write_file(dir / "metrics.json", run_metrics_json(report).dump(2) + "\n");
    write_file(dir / "resolved_config.toml",
               to_config_text(ExperimentConfig{report.config, ablation.value_or(AblationSpec{})}));
    save_checkpoint(report.model, dir / checkpoint_file_name(report.config.checkpoint_format),
                    report.config.checkpoint_format);
    write_manifest(dir);
}

}  // namespace alsr
