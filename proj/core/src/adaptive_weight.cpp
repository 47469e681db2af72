#include "alsr/adaptive_weight.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "alsr/errors.hpp"

namespace alsr {

std::string_view to_string(Kernel kernel) {
    switch (kernel) {
        case Kernel::Exponential:
            return "exponential";
        case Kernel::Rational:
            return "rational";
    }
    return "unknown";
}

Kernel kernel_from_string(std::string_view name) {
    if (name == "rational") {
        return Kernel::Rational;
    }
    if (name == "exponential") {
        return Kernel::Exponential;
    }
    throw ConfigError("unknown kernel '" + std::string(name) + "' (expected rational or exponential)");
}

void validate(const WeightConfig& cfg) {
    if (!(cfg.alpha >= 0.0) || !std::isfinite(cfg.alpha)) {
        throw ContractViolation("alpha must be a finite non-negative number");
    }
    if (const auto* fixed = std::get_if<FixedCenter>(&cfg.center_mode); fixed && !std::isfinite(fixed->value)) {
        throw ContractViolation("fixed center must be finite");
    }
}

double batch_center(std::span<const double> lambdas) {
    if (lambdas.empty()) {
        throw ContractViolation("batch_center: empty batch");
    }
    return std::accumulate(lambdas.begin(), lambdas.end(), 0.0) / static_cast<double>(lambdas.size());
}

double weight(double lambda, double center, const WeightConfig& cfg) {
    const double d = lambda - center;
    const double u = cfg.alpha * d * d;
    switch (cfg.kernel) {
        case Kernel::Exponential:
            return std::exp(-u);
        case Kernel::Rational:
            return 1.0 / (1.0 + u);
    }
    return 1.0;
}

double resolve_center(std::span<const double> lambdas, const WeightConfig& cfg) {
    if (const auto* fixed = std::get_if<FixedCenter>(&cfg.center_mode)) {
        return fixed->value;
    }
    return batch_center(lambdas);
}

std::vector<double> batch_weights(std::span<const double> lambdas, double center, const WeightConfig& cfg) {
    std::vector<double> w(lambdas.size());
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        w[i] = weight(lambdas[i], center, cfg);
    }
    if (cfg.normalize_batch_weights && !w.empty()) {
        const double mean = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(w.size());
        for (double& wi : w) {
            wi /= mean;
        }
    }
    return w;
}

std::vector<double> apply_weights(std::span<const double> per_sample_losses,
                                  std::span<const double> lambdas,
                                  const WeightConfig& cfg) {
    if (per_sample_losses.size() != lambdas.size()) {
        throw ContractViolation("apply_weights: " + std::to_string(per_sample_losses.size()) + " losses but " +
                                std::to_string(lambdas.size()) + " log-SNR values");
    }
    if (lambdas.empty()) {
        return {};
    }
    const auto w = batch_weights(lambdas, resolve_center(lambdas, cfg), cfg);
    std::vector<double> out(per_sample_losses.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = w[i] * per_sample_losses[i];
    }
    return out;
}

}  // namespace alsr
