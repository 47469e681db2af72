#include "alsr/snr_domain.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "alsr/errors.hpp"

namespace alsr {
namespace {

void require_sigma_data(double sigma_data) {
    if (!(sigma_data > 0.0) || !std::isfinite(sigma_data)) {
        throw DomainError("sigma_data must be positive and finite, got " + std::to_string(sigma_data));
    }
}

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};

}  // namespace

NoiseScale::NoiseScale(double sigma) : sigma_(sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw DomainError("noise scale must be positive and finite, got " + std::to_string(sigma));
    }
}

LogSnr::LogSnr(double lambda) : lambda_(lambda) {
    if (!std::isfinite(lambda)) {
        throw DomainError("log-SNR must be finite");
    }
}

void validate(const SamplerSpec& spec) {
    std::visit(Overloaded{
                   [](const LogUniform& s) {
                       if (!(s.sigma_min > 0.0) || !(s.sigma_min < s.sigma_max) || !std::isfinite(s.sigma_max)) {
                           throw DomainError("loguniform sampler requires 0 < sigma_min < sigma_max");
                       }
                   },
                   [](const LogNormal& s) {
                       if (!(s.p_std > 0.0) || !std::isfinite(s.p_std) || !std::isfinite(s.p_mean)) {
                           throw DomainError("lognormal sampler requires p_std > 0 and finite p_mean");
                       }
                   },
               },
               spec);
}

LogSnr sigma_to_logsnr(NoiseScale sigma, double sigma_data) {
    require_sigma_data(sigma_data);
    const double s = sigma.value();
    return LogSnr(std::log((sigma_data * sigma_data) / (s * s)));
}

NoiseScale logsnr_to_sigma(LogSnr lambda, double sigma_data) {
    require_sigma_data(sigma_data);
    const double sigma = sigma_data * std::exp(-lambda.value() / 2.0);
    if (!std::isfinite(sigma) || sigma <= 0.0) {
        throw DomainError("log-SNR " + std::to_string(lambda.value()) + " maps outside the representable sigma range");
    }
    return NoiseScale(sigma);
}

NoiseScale sample_noise_scale(const SamplerSpec& spec, Rng& rng) {
    return std::visit(Overloaded{
                          [&](const LogUniform& s) {
                              std::uniform_real_distribution<double> dist(std::log(s.sigma_min), std::log(s.sigma_max));
                              return NoiseScale(std::exp(dist(rng)));
                          },
                          [&](const LogNormal& s) {
                              return NoiseScale(std::exp(s.p_mean + s.p_std * standard_normal(rng)));
                          },
                      },
                      spec);
}

double density_logsnr(const SamplerSpec& spec, LogSnr lambda, double sigma_data) {
    require_sigma_data(sigma_data);
    // lambda = 2 ln(sigma_data) - 2 ln(sigma): an affine map of ln(sigma) with |Jacobian| 1/2.
    const double ln_sigma = std::log(sigma_data) - lambda.value() / 2.0;
    return std::visit(Overloaded{
                          [&](const LogUniform& s) {
                              const double lo = std::log(s.sigma_min);
                              const double hi = std::log(s.sigma_max);
                              if (ln_sigma < lo || ln_sigma > hi) {
                                  return 0.0;
                              }
                              return 0.5 / (hi - lo);
                          },
                          [&](const LogNormal& s) {
                              const double z = (ln_sigma - s.p_mean) / s.p_std;
                              const double pdf_ln_sigma = std::exp(-0.5 * z * z) / (s.p_std * std::sqrt(2.0 * std::numbers::pi));
                              return 0.5 * pdf_ln_sigma;
                          },
                      },
                      spec);
}

std::pair<double, double> effective_support(const SamplerSpec& spec, double sigma_data) {
    require_sigma_data(sigma_data);
    const double offset = 2.0 * std::log(sigma_data);
    return std::visit(Overloaded{
                          [&](const LogUniform& s) {
                              return std::pair{offset - 2.0 * std::log(s.sigma_max), offset - 2.0 * std::log(s.sigma_min)};
                          },
                          [&](const LogNormal& s) {
                              const double center = offset - 2.0 * s.p_mean;
                              return std::pair{center - 16.0 * s.p_std, center + 16.0 * s.p_std};
                          },
                      },
                      spec);
}

}  // namespace alsr
