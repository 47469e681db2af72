#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "alsr/config.hpp"
#include "alsr/trainer.hpp"

namespace alsr {

struct AblationRun {
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    MetricReport final_metrics;
    std::vector<EvalPoint> evals;
};

/// Mean and sample standard deviation (n - 1 denominator) of per-seed values.
struct SeedSummary {
    double mean = 0.0;
    std::optional<double> std;  ///< empty with fewer than two values
};

SeedSummary summarize(const std::vector<double>& values);

struct AblationCell {
    double alpha = 0.0;
    Kernel kernel = Kernel::Rational;
    std::vector<AblationRun> runs;  ///< sorted by seed
    std::optional<SeedSummary> energy;
    std::optional<SeedSummary> sliced;

    std::size_t ok_count() const;
    bool failed() const { return ok_count() != runs.size(); }
};

struct AblationTable {
    std::vector<std::uint64_t> seeds;  ///< sorted, unique
    std::vector<AblationCell> cells;   ///< alpha-major, then kernel, in sweep order

    bool all_ok() const;
};

using RunFn = std::function<RunReport(const RunConfig&)>;

struct AblationOptions {
    /// When set, every run writes its outputs to out_dir/runs/<run name>/.
    std::optional<std::filesystem::path> out_dir;
    unsigned threads = 1;
    RunFn run = [](const RunConfig& c) { return run_training(c); };
};

/// Directory name for one run, e.g. "alpha0.05_rational_seed1".
std::string ablation_run_name(double alpha, Kernel kernel, std::uint64_t seed);

/// Cross product of alphas x kernels x seeds. A failing run marks its cell
/// failed without stopping the sweep.
AblationTable run_ablation(const RunConfig& base, const std::vector<double>& alphas,
                           const std::vector<Kernel>& kernels, const std::vector<std::uint64_t>& seeds,
                           const AblationOptions& options = {});

inline constexpr const char* kAblationMetricNote =
    "# metrics: energy distance and sliced Wasserstein-1 stand in for FID; std is the sample std over seeds";

/// ablation.csv: alpha,kernel,status,n_ok,energy_mean,energy_std,sw_mean,sw_std,
/// then energy_seed<s> and sw_seed<s> for every seed.
std::string ablation_csv(const AblationTable& table);

}  // namespace alsr
