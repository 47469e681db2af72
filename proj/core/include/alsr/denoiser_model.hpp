#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "alsr/rng.hpp"
#include "alsr/snr_domain.hpp"

namespace alsr {

/// Sinusoidal features [sin(f_k c) ..., cos(f_k c) ...] of the conditioning value c.
struct NoiseEmbedding {
    std::vector<double> frequencies;

    /// n frequencies spaced geometrically on [min_frequency, max_frequency].
    static NoiseEmbedding geometric(int n_frequencies, double min_frequency = 0.25, double max_frequency = 32.0);

    int dim() const noexcept { return 2 * static_cast<int>(frequencies.size()); }
    void embed(double c_noise, std::span<double> out) const;
    Eigen::VectorXd embed(double c_noise) const;
};

struct MlpArchitecture {
    int data_dim = 2;
    std::vector<int> hidden = {128, 128, 128};
    NoiseEmbedding embedding = NoiseEmbedding::geometric(16);

    int input_dim() const noexcept { return data_dim + embedding.dim(); }
    void validate() const;
};

class MlpDenoiser;

/// Activations saved by a batched forward pass. Columns are samples.
struct ForwardCache {
    Eigen::MatrixXd input;                    ///< [x_in; embedding] for every sample
    std::vector<Eigen::MatrixXd> pre;         ///< pre-activation of each layer
    std::vector<Eigen::MatrixXd> activation;  ///< SiLU output of each hidden layer
    const MlpDenoiser* owner = nullptr;
    std::uint64_t version = 0;

    const Eigen::MatrixXd& output() const { return pre.back(); }
};

/// Fully connected raw network f(x_in, c_noise) with SiLU hidden layers and a
/// linear output layer. All parameters live in one flat vector so optimizers
/// and checkpoints can treat them uniformly; layer l stores its weight
/// (out x in, column-major) followed by its bias.
class MlpDenoiser {
public:
    /// All-zero parameters.
    explicit MlpDenoiser(MlpArchitecture arch = {});

    /// He-scaled Gaussian init for hidden layers, 1e-2/fan_in variance for the
    /// output layer, zero biases.
    static MlpDenoiser initialized(MlpArchitecture arch, Rng& rng);

    const MlpArchitecture& architecture() const noexcept { return arch_; }
    int layer_count() const noexcept { return static_cast<int>(layers_.size()); }
    int layer_inputs(int layer) const { return layers_.at(static_cast<std::size_t>(layer)).in; }
    int layer_outputs(int layer) const { return layers_.at(static_cast<std::size_t>(layer)).out; }

    Eigen::Map<const Eigen::MatrixXd> weight(int layer) const;
    Eigen::Map<const Eigen::VectorXd> bias(int layer) const;
    Eigen::Map<Eigen::MatrixXd> mutable_weight(int layer);
    Eigen::Map<Eigen::VectorXd> mutable_bias(int layer);

    const Eigen::VectorXd& parameters() const noexcept { return params_; }
    /// Any mutable access invalidates outstanding forward caches.
    Eigen::VectorXd& mutable_parameters() noexcept;
    Eigen::Index parameter_count() const noexcept { return params_.size(); }
    std::uint64_t version() const noexcept { return version_; }

    Eigen::VectorXd forward(const Eigen::VectorXd& x_in, double c_noise) const;
    /// x_in is data_dim x batch; c_noise has one entry per column.
    Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& x_in, std::span<const double> c_noise) const;
    ForwardCache forward_cached(const Eigen::MatrixXd& x_in, std::span<const double> c_noise) const;

    /// Gradient of sum_j <upstream_j, output_j> with respect to every parameter,
    /// in the flat parameter layout. Throws ContractViolation for a stale cache.
    Eigen::VectorXd backward(const ForwardCache& cache, const Eigen::MatrixXd& upstream) const;

private:
    struct Layer {
        int in;
        int out;
        Eigen::Index offset;
    };

    Eigen::MatrixXd build_input(const Eigen::MatrixXd& x_in, std::span<const double> c_noise) const;

    MlpArchitecture arch_;
    std::vector<Layer> layers_;
    Eigen::VectorXd params_;
    std::uint64_t version_ = 0;
};

/// Posterior mean E[x | x_tilde] for x ~ Normal(0, sigma_data^2 I):
/// sigma_data^2 / (sigma_data^2 + sigma^2) * x_tilde.
Eigen::VectorXd analytic_gaussian_denoiser(const Eigen::VectorXd& x_tilde, NoiseScale sigma, double sigma_data);

}  // namespace alsr
