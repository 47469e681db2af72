#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace alsr {

/// Uniform partition of [lambda_min, lambda_max] into n_bins bins.
struct BinGrid {
    double lambda_min = -12.0;
    double lambda_max = 12.0;
    int n_bins = 32;

    void validate() const;
    double width() const { return (lambda_max - lambda_min) / n_bins; }
    double lower_edge(int bin) const;
    double upper_edge(int bin) const;
};

/// Welford accumulator for a single bin.
struct BinAccumulator {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;  ///< Sum of squared deviations from the mean.

    void add(double value);
    /// Chan et al. pairwise combination.
    void merge(const BinAccumulator& other);
    /// Sample variance (n - 1 denominator); empty when count < 2.
    std::optional<double> variance() const;
};

/// Streaming per-bin loss statistics keyed by log-SNR. Out-of-range lambdas are
/// clamped into the edge bin and also counted separately.
class BinnedStats {
public:
    explicit BinnedStats(BinGrid grid = {});

    void record(double lambda, double loss_value);
    /// Combine with statistics gathered on the same grid by another writer.
    void merge(const BinnedStats& other);

    const BinGrid& grid() const noexcept { return grid_; }
    std::span<const BinAccumulator> bins() const noexcept { return bins_; }
    const BinAccumulator& bin(int index) const { return bins_.at(static_cast<std::size_t>(index)); }
    std::uint64_t out_of_range_low() const noexcept { return below_; }
    std::uint64_t out_of_range_high() const noexcept { return above_; }
    std::uint64_t total_recorded() const noexcept { return total_; }

    /// Bin for lambda after clamping into the grid.
    int bin_index(double lambda) const;

private:
    BinGrid grid_;
    std::vector<BinAccumulator> bins_;
    std::uint64_t below_ = 0;
    std::uint64_t above_ = 0;
    std::uint64_t total_ = 0;
};

struct StageSnapshot {
    std::uint64_t step;
    BinnedStats stats;
};

StageSnapshot snapshot(const BinnedStats& stats, std::uint64_t step);

/// One row of the heatmap CSV.
struct HeatmapRow {
    std::uint64_t step;
    int bin_index;
    double lambda_lo;
    double lambda_hi;
    std::uint64_t count;
    double mean;
    std::optional<double> variance;
};

inline constexpr const char* kHeatmapHeader = "step,bin_index,lambda_lo,lambda_hi,count,mean,variance";

std::vector<HeatmapRow> heatmap_rows(std::span<const StageSnapshot> snapshots);
void export_heatmap(std::span<const StageSnapshot> snapshots, const std::filesystem::path& path);
std::vector<HeatmapRow> read_heatmap(const std::filesystem::path& path);

/// Coefficient of variation (population std / mean) of per-bin variances over
/// bins with count >= 2. Throws InsufficientData with fewer than two such bins.
double variance_concentration(const BinnedStats& stats);
double variance_concentration(std::span<const double> bin_variances);

}  // namespace alsr
