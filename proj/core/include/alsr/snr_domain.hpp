#pragma once

#include <utility>
#include <variant>

#include "alsr/rng.hpp"

namespace alsr {

/// Standard deviation of the Gaussian corruption. Always positive and finite.
class NoiseScale {
public:
    explicit NoiseScale(double sigma);

    double value() const noexcept { return sigma_; }

private:
    double sigma_;
};

/// Log signal-to-noise ratio log(sigma_data^2 / sigma^2). Always finite.
class LogSnr {
public:
    explicit LogSnr(double lambda);

    double value() const noexcept { return lambda_; }

private:
    double lambda_;
};

/// ln(sigma) uniform on [ln sigma_min, ln sigma_max].
struct LogUniform {
    double sigma_min = 0.002;
    double sigma_max = 80.0;
};

/// ln(sigma) ~ Normal(p_mean, p_std^2).
struct LogNormal {
    double p_mean = -1.2;
    double p_std = 1.2;
};

using SamplerSpec = std::variant<LogNormal, LogUniform>;

/// Throws DomainError if the spec violates its invariants.
void validate(const SamplerSpec& spec);

LogSnr sigma_to_logsnr(NoiseScale sigma, double sigma_data);
NoiseScale logsnr_to_sigma(LogSnr lambda, double sigma_data);

NoiseScale sample_noise_scale(const SamplerSpec& spec, Rng& rng);

/// Density of lambda induced by the spec's law over sigma:
/// p(lambda) = p_sigma(sigma(lambda)) * sigma(lambda) / 2. Zero outside the support.
double density_logsnr(const SamplerSpec& spec, LogSnr lambda, double sigma_data);

/// Lambda interval holding all (LogUniform) or all but ~1e-15 (LogNormal, +-8 std) of the mass.
std::pair<double, double> effective_support(const SamplerSpec& spec, double sigma_data);

}  // namespace alsr
