#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "alsr/rng.hpp"

namespace alsr {

/// A finite log-SNR grid with a base sampling law and the conditional mean and
/// variance of a scalar per-sample gradient at every grid point.
struct DiscretePopulation {
    std::vector<double> lambdas;
    std::vector<double> base_prob;
    std::vector<double> cond_mean;
    std::vector<double> cond_var;

    std::size_t size() const noexcept { return lambdas.size(); }
    /// Throws ContractViolation on length mismatch, negative entries,
    /// duplicate grid points, or base_prob not summing to 1 within 1e-12.
    void validate() const;
};

struct Proposal {
    std::vector<double> probs;
};

struct VarianceDecomposition {
    double within;   ///< sum q * v
    double between;  ///< sum q * m^2 - (sum q * m)^2
    double total;    ///< within + between
};

enum class ProposalMode {
    CondStd,          ///< probs proportional to q * sqrt(v)
    FullSecondMoment,  ///< probs proportional to q * sqrt(v + m^2), the exact minimizer
};

VarianceDecomposition total_variance_decompose(const DiscretePopulation& pop);

/// Target of the importance-weighted estimator: sum q * m.
double population_mean(const DiscretePopulation& pop);

/// Exact variance of (1/n) sum (q/p)(lambda_i) g_i with lambda_i ~ p:
/// (1/n) [ sum q^2 (v + m^2) / p - (sum q m)^2 ].
double estimator_variance(const DiscretePopulation& pop, const Proposal& prop, std::uint64_t n);

Proposal optimal_proposal(const DiscretePopulation& pop, ProposalMode mode);

/// Lattice resolution used when the caller does not choose one:
/// 1000 for 2 points, 100 for 3, 40 for 4.
int default_lattice_resolution(std::size_t grid_size);

struct OptimalityReport {
    int resolution = 0;
    std::uint64_t lattice_points = 0;  ///< Lattice proposals with finite variance.
    Proposal lattice_minimizer;
    double lattice_min_variance = 0.0;
    Proposal full_second_moment;
    double full_second_moment_variance = 0.0;
    std::optional<Proposal> cond_std;         ///< Empty when every conditional variance is zero.
    std::optional<double> cond_std_variance;  ///< Empty when the proposal is missing or breaks absolute continuity.
    double base_variance = 0.0;
    /// lattice_min_variance - full_second_moment_variance; non-negative up to rounding.
    double discretization_gap = 0.0;
    double distance_to_full_second_moment = 0.0;  ///< max-abs distance from the lattice minimizer
    std::optional<double> distance_to_cond_std;
    bool optimum_attains_lattice_minimum = false;
};

/// Exhaustive search of the simplex lattice {k / resolution} for grids of at
/// most 4 points. Throws UnsupportedSize for larger grids.
OptimalityReport verify_optimality(const DiscretePopulation& pop, int resolution, std::uint64_t n = 1);

/// One draw of the importance-weighted estimator with n grid samples from prop
/// and g ~ Normal(m, v) at each.
double importance_estimate(const DiscretePopulation& pop, const Proposal& prop, std::uint64_t n, Rng& rng);

DiscretePopulation population_from_json(const nlohmann::json& doc);
nlohmann::ordered_json to_json(const DiscretePopulation& pop);
nlohmann::ordered_json to_json(const OptimalityReport& report);

/// Full report emitted by `alsr variance-lab`.
nlohmann::ordered_json variance_lab_report(const DiscretePopulation& pop, int resolution, std::uint64_t n);

}  // namespace alsr
