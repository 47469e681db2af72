#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "alsr/config.hpp"
#include "alsr/trainer.hpp"

namespace alsr {

inline constexpr const char* kCurveHeader = "step,loss_weighted,loss_unweighted,mean_weight";
inline constexpr const char* kEvalCurveHeader = "step,energy_distance,sliced_wasserstein";
inline constexpr const char* kMetricNote =
    "energy distance and sliced Wasserstein-1 on generated 2-D samples stand in for FID";

std::string curve_csv(const TrainingCurve& curve);
std::string eval_curve_csv(std::span<const EvalPoint> evals);

nlohmann::ordered_json metrics_json(const MetricReport& m);
/// metrics.json contents for a finished run.
nlohmann::ordered_json run_metrics_json(const RunReport& report);

/// Writes curve.csv, eval_curve.csv, heatmap.csv, metrics.json,
/// resolved_config.toml, the model checkpoint and manifest.json into `dir`.
void write_run_outputs(const RunReport& report, const std::filesystem::path& dir,
                       const std::optional<AblationSpec>& ablation = std::nullopt);

/// File name of the checkpoint written for a given format.
std::string checkpoint_file_name(CheckpointFormat format);

}  // namespace alsr
