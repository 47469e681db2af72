#include "alsr/telemetry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "alsr/errors.hpp"
#include "alsr/text_format.hpp"

namespace alsr {

void BinGrid::validate() const {
    if (!(lambda_min < lambda_max) || !std::isfinite(lambda_min) || !std::isfinite(lambda_max)) {
        throw ContractViolation("bin grid requires finite lambda_min < lambda_max");
    }
    if (n_bins < 2) {
        throw ContractViolation("bin grid requires at least 2 bins");
    }
}

double BinGrid::lower_edge(int bin) const {
    return bin == 0 ? lambda_min : lambda_min + bin * width();
}

double BinGrid::upper_edge(int bin) const {
    return bin == n_bins - 1 ? lambda_max : lambda_min + (bin + 1) * width();
}

void BinAccumulator::add(double value) {
    ++count;
    const double delta = value - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (value - mean);
    if (m2 < 0.0) {
        m2 = 0.0;
    }
}

void BinAccumulator::merge(const BinAccumulator& other) {
    if (other.count == 0) {
        return;
    }
    if (count == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(count);
    const double nb = static_cast<double>(other.count);
    const double n = na + nb;
    const double delta = other.mean - mean;
    mean += delta * nb / n;
    m2 += other.m2 + delta * delta * na * nb / n;
    count += other.count;
}

std::optional<double> BinAccumulator::variance() const {
    if (count < 2) {
        return std::nullopt;
    }
    return m2 / static_cast<double>(count - 1);
}

BinnedStats::BinnedStats(BinGrid grid) : grid_(grid) {
    grid_.validate();
    bins_.resize(static_cast<std::size_t>(grid_.n_bins));
}

int BinnedStats::bin_index(double lambda) const {
    const double pos = std::floor((lambda - grid_.lambda_min) / grid_.width());
    if (pos < 0.0) {
        return 0;
    }
    if (pos >= grid_.n_bins) {
        return grid_.n_bins - 1;
    }
    return static_cast<int>(pos);
}

void BinnedStats::record(double lambda, double loss_value) {
    if (!std::isfinite(lambda) || !std::isfinite(loss_value)) {
        throw ContractViolation("telemetry record: non-finite input");
    }
    if (lambda < grid_.lambda_min) {
        ++below_;
    } else if (lambda >= grid_.lambda_max) {
        ++above_;
    }
    bins_[static_cast<std::size_t>(bin_index(lambda))].add(loss_value);
    ++total_;
}

void BinnedStats::merge(const BinnedStats& other) {
    if (other.grid_.lambda_min != grid_.lambda_min || other.grid_.lambda_max != grid_.lambda_max ||
        other.grid_.n_bins != grid_.n_bins) {
        throw ContractViolation("telemetry merge: grids differ");
    }
    for (std::size_t i = 0; i < bins_.size(); ++i) {
        bins_[i].merge(other.bins_[i]);
    }
    below_ += other.below_;
    above_ += other.above_;
    total_ += other.total_;
}

StageSnapshot snapshot(const BinnedStats& stats, std::uint64_t step) {
    return StageSnapshot{step, stats};
}

std::vector<HeatmapRow> heatmap_rows(std::span<const StageSnapshot> snapshots) {
    std::vector<HeatmapRow> rows;
    for (const auto& snap : snapshots) {
        const auto& grid = snap.stats.grid();
        for (int b = 0; b < grid.n_bins; ++b) {
            const auto& acc = snap.stats.bin(b);
            rows.push_back(HeatmapRow{snap.step, b, grid.lower_edge(b), grid.upper_edge(b), acc.count, acc.mean,
                                      acc.variance()});
        }
    }
    return rows;
}

void export_heatmap(std::span<const StageSnapshot> snapshots, const std::filesystem::path& path) {
    if (snapshots.empty()) {
        throw ContractViolation("export_heatmap: no snapshots");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << kHeatmapHeader << '\n';
    for (const auto& row : heatmap_rows(snapshots)) {
        out << row.step << ',' << row.bin_index << ',' << format_real(row.lambda_lo) << ','
            << format_real(row.lambda_hi) << ',' << row.count << ',' << format_real(row.mean) << ','
            << (row.variance ? format_real(*row.variance) : std::string{}) << '\n';
    }
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

std::vector<HeatmapRow> read_heatmap(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::string line;
    std::getline(in, line);
    if (line != kHeatmapHeader) {
        throw IoError(path.string() + ": unexpected heatmap header");
    }
    std::vector<HeatmapRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto cells = split_csv_line(line);
        if (cells.size() != 7) {
            throw IoError(path.string() + ": malformed heatmap row '" + line + "'");
        }
        HeatmapRow row{};
        row.step = std::stoull(cells[0]);
        row.bin_index = std::stoi(cells[1]);
        row.lambda_lo = std::stod(cells[2]);
        row.lambda_hi = std::stod(cells[3]);
        row.count = std::stoull(cells[4]);
        row.mean = std::stod(cells[5]);
        if (!cells[6].empty()) {
            row.variance = std::stod(cells[6]);
        }
        rows.push_back(row);
    }
    return rows;
}

double variance_concentration(std::span<const double> v) {
    if (v.size() < 2) {
        throw InsufficientData("variance_concentration needs at least 2 bins with count >= 2");
    }
    double mean = 0.0;
    for (double x : v) {
        mean += x;
    }
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) {
        ss += (x - mean) * (x - mean);
    }
    const double std = std::sqrt(ss / static_cast<double>(v.size()));
    if (mean == 0.0) {
        return 0.0;
    }
    return std / mean;
}

double variance_concentration(const BinnedStats& stats) {
    std::vector<double> v;
    for (const auto& acc : stats.bins()) {
        if (auto var = acc.variance()) {
            v.push_back(*var);
        }
    }
    return variance_concentration(v);
}

}  // namespace alsr
