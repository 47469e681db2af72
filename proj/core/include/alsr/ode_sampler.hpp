#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "alsr/denoiser_model.hpp"
#include "alsr/rng.hpp"

namespace alsr {

/// Rho-warped noise levels from sigma_max down to sigma_min, followed by a final 0.
struct SigmaSchedule {
    double sigma_max = 80.0;
    double sigma_min = 0.002;
    int n_steps = 40;
    double rho = 7.0;

    void validate() const;
    /// n_steps + 1 levels ending in 0; empty when n_steps == 0.
    std::vector<double> levels() const;
};

/// Batched denoiser D(x, sigma); columns of x are samples.
using BatchDenoiser = std::function<Eigen::MatrixXd(const Eigen::MatrixXd& x, double sigma)>;

/// Wraps a raw network with EDM preconditioning.
BatchDenoiser make_model_denoiser(const MlpDenoiser& model, double sigma_data);

/// Posterior mean for Normal(0, sigma_data^2 I) data.
BatchDenoiser make_analytic_denoiser(double sigma_data);

/// Heun integration of dx/dsigma = (x - D(x, sigma)) / sigma from
/// x ~ Normal(0, sigma_max^2 I) down the schedule, with an Euler final step.
/// Throws SamplingError if the state stops being finite.
Eigen::MatrixXd ode_sample(const BatchDenoiser& denoiser, const SigmaSchedule& schedule, std::size_t n, int dim,
                           Rng& rng);

}  // namespace alsr
