#pragma once

#include <functional>

#include <Eigen/Dense>

#include "alsr/snr_domain.hpp"

namespace alsr {

/// EDM preconditioning for one noise scale.
struct PreconditionSet {
    double c_skip;
    double c_out;
    double c_in;
    double w_edm;  ///< (sigma^2 + sigma_data^2) / (sigma * sigma_data)^2, so w_edm * c_out^2 == 1.
};

PreconditionSet precondition(NoiseScale sigma, double sigma_data);

/// Conditioning value passed to the raw network: ln(sigma) / 4.
double noise_conditioning(NoiseScale sigma);

/// A clean point, its noise draw, and x_tilde = x + sigma * eps.
class NoisySample {
public:
    NoisySample(Eigen::VectorXd x, Eigen::VectorXd eps, NoiseScale sigma);

    const Eigen::VectorXd& x() const noexcept { return x_; }
    const Eigen::VectorXd& eps() const noexcept { return eps_; }
    const Eigen::VectorXd& x_tilde() const noexcept { return x_tilde_; }
    NoiseScale sigma() const noexcept { return sigma_; }
    Eigen::Index dim() const noexcept { return x_.size(); }

private:
    Eigen::VectorXd x_;
    Eigen::VectorXd eps_;
    Eigen::VectorXd x_tilde_;
    NoiseScale sigma_;
};

/// Raw network f(input, c_noise).
using RawModel = std::function<Eigen::VectorXd(const Eigen::VectorXd& input, double c_noise)>;

/// D(x_tilde, sigma) = c_skip * x_tilde + c_out * model(c_in * x_tilde, c_noise(sigma)).
Eigen::VectorXd denoise(const RawModel& model, const NoisySample& noisy, const PreconditionSet& coeffs);

/// w_edm * ||denoised - x||^2.
double per_sample_edm_loss(const Eigen::Ref<const Eigen::VectorXd>& denoised,
                           const Eigen::Ref<const Eigen::VectorXd>& x,
                           const PreconditionSet& coeffs);

}  // namespace alsr
