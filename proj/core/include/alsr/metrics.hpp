#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "alsr/rng.hpp"

namespace alsr {

inline constexpr std::size_t kEnergySubsampleThreshold = 4096;

/// Energy distance 2 E|A - B| - E|A - A'| - E|B - B'| with unbiased (U-statistic)
/// within-sample terms. Inputs larger than max_points are replaced by a
/// seed-deterministic subsample of max_points columns. The U-statistic can dip
/// below zero by sampling noise; the result is clamped at 0.
double energy_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, std::uint64_t seed = 0,
                       std::size_t max_points = kEnergySubsampleThreshold);

/// Same quantity with V-statistic within-sample terms (all pairs, including
/// i == j). Non-negative and exactly 0 for identical inputs.
double energy_distance_vstat(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Exact Wasserstein-1 distance between two 1-D empirical distributions.
double wasserstein1_1d(std::vector<double> a, std::vector<double> b);

/// Mean over random unit directions of the 1-D Wasserstein-1 distance between projections.
double sliced_wasserstein(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, int n_projections, Rng& rng);

struct MetricReport {
    double energy_distance = 0.0;
    double sliced_wasserstein = 0.0;
    std::size_t n_generated = 0;
    std::size_t n_reference = 0;
    std::uint64_t seed = 0;
};

/// Both distances between generated and reference samples, randomness drawn
/// from substreams of `seed`.
MetricReport evaluate_samples(const Eigen::MatrixXd& generated, const Eigen::MatrixXd& reference,
                              int n_projections, std::uint64_t seed);

}  // namespace alsr
