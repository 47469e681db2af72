#include "alsr/edm_core.hpp"

#include <cmath>
#include <string>

#include "alsr/errors.hpp"

namespace alsr {

PreconditionSet precondition(NoiseScale sigma, double sigma_data) {
    if (!(sigma_data > 0.0) || !std::isfinite(sigma_data)) {
        throw DomainError("sigma_data must be positive and finite");
    }
    const double s = sigma.value();
    const double s2 = s * s;
    const double d2 = sigma_data * sigma_data;
    const double total = s2 + d2;
    const double root = std::sqrt(total);
    const double prod = s * sigma_data;
    return PreconditionSet{
        .c_skip = d2 / total,
        .c_out = prod / root,
        .c_in = 1.0 / root,
        .w_edm = total / (prod * prod),
    };
}

double noise_conditioning(NoiseScale sigma) {
    return std::log(sigma.value()) / 4.0;
}

NoisySample::NoisySample(Eigen::VectorXd x, Eigen::VectorXd eps, NoiseScale sigma)
    : x_(std::move(x)), eps_(std::move(eps)), sigma_(sigma) {
    if (x_.size() != eps_.size()) {
        throw ContractViolation("noisy sample: x has dimension " + std::to_string(x_.size()) +
                                " but eps has dimension " + std::to_string(eps_.size()));
    }
    x_tilde_ = x_ + sigma_.value() * eps_;
}

Eigen::VectorXd denoise(const RawModel& model, const NoisySample& noisy, const PreconditionSet& coeffs) {
    const Eigen::VectorXd input = coeffs.c_in * noisy.x_tilde();
    const Eigen::VectorXd r = model(input, noise_conditioning(noisy.sigma()));
    if (r.size() != noisy.dim()) {
        throw ContractViolation("denoise: model returned dimension " + std::to_string(r.size()) +
                                ", expected " + std::to_string(noisy.dim()));
    }
    return coeffs.c_skip * noisy.x_tilde() + coeffs.c_out * r;
}

double per_sample_edm_loss(const Eigen::Ref<const Eigen::VectorXd>& denoised,
                           const Eigen::Ref<const Eigen::VectorXd>& x,
                           const PreconditionSet& coeffs) {
    if (denoised.size() != x.size()) {
        throw ContractViolation("per_sample_edm_loss: dimension mismatch");
    }
    return coeffs.w_edm * (denoised - x).squaredNorm();
}

}  // namespace alsr
