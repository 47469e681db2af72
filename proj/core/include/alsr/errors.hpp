#pragma once

#include <stdexcept>
#include <string>

namespace alsr {

/// Input outside the mathematical domain of an operation (non-positive sigma, overflow).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Caller broke a precondition: mismatched dimensions, empty batch, stale cache.
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class InsufficientData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegeneratePopulation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Proposal assigns zero mass where the base distribution is positive.
class AbsoluteContinuityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnsupportedSize : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by the trainer when a batch loss is not finite. `diagnostic` carries
/// the step, the sigma draws and the loss components as plain text.
class TrainingDiverged : public std::runtime_error {
public:
    TrainingDiverged(const std::string& what, std::string diagnostic)
        : std::runtime_error(what), diagnostic_(std::move(diagnostic)) {}

    const std::string& diagnostic() const noexcept { return diagnostic_; }

private:
    std::string diagnostic_;
};

/// Raised by the ODE sampler when the state leaves the finite range.
class SamplingError : public std::runtime_error {
public:
    SamplingError(const std::string& what, double sigma)
        : std::runtime_error(what), sigma_(sigma) {}

    double sigma() const noexcept { return sigma_; }

private:
    double sigma_;
};

}  // namespace alsr
