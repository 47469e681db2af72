#pragma once

#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace alsr {

enum class Kernel {
    Exponential,  ///< exp(-alpha (lambda - c)^2)
    Rational,     ///< 1 / (1 + alpha (lambda - c)^2)
};

std::string_view to_string(Kernel kernel);
Kernel kernel_from_string(std::string_view name);

/// Center each batch on the arithmetic mean of its log-SNR values.
struct BatchMeanCenter {};

/// Center every batch on a fixed log-SNR.
struct FixedCenter {
    double value = 0.0;
};

using CenterMode = std::variant<BatchMeanCenter, FixedCenter>;

struct WeightConfig {
    double alpha = 0.05;
    Kernel kernel = Kernel::Rational;
    CenterMode center_mode = BatchMeanCenter{};
    /// Divide the batch weights by their mean. Off by default; when on,
    /// individual weights may exceed 1.
    bool normalize_batch_weights = false;
};

/// Throws ContractViolation if alpha is negative or not finite.
void validate(const WeightConfig& cfg);

/// Arithmetic mean of a non-empty batch of log-SNR values.
double batch_center(std::span<const double> lambdas);

/// Kernel weight in (0, 1]; exactly 1 at lambda == center or alpha == 0.
double weight(double lambda, double center, const WeightConfig& cfg);

/// Center for a batch under cfg.center_mode.
double resolve_center(std::span<const double> lambdas, const WeightConfig& cfg);

/// Per-sample weights around an explicit center, normalized when the config asks for it.
std::vector<double> batch_weights(std::span<const double> lambdas, double center, const WeightConfig& cfg);

/// losses[i] * w(lambdas[i]) with the center resolved per batch.
std::vector<double> apply_weights(std::span<const double> per_sample_losses,
                                  std::span<const double> lambdas,
                                  const WeightConfig& cfg);

}  // namespace alsr
