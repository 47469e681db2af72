#include "alsr/denoiser_model.hpp"

#include <cmath>
#include <string>

#include "alsr/errors.hpp"

namespace alsr {
namespace {

Eigen::MatrixXd silu(const Eigen::MatrixXd& z) {
    return (z.array() / (1.0 + (-z.array()).exp())).matrix();
}

Eigen::MatrixXd silu_grad(const Eigen::MatrixXd& z) {
    const Eigen::ArrayXXd s = 1.0 / (1.0 + (-z.array()).exp());
    return (s * (1.0 + z.array() * (1.0 - s))).matrix();
}

}  // namespace

NoiseEmbedding NoiseEmbedding::geometric(int n_frequencies, double min_frequency, double max_frequency) {
    if (n_frequencies < 1 || !(min_frequency > 0.0) || !(max_frequency >= min_frequency)) {
        throw ContractViolation("noise embedding needs n >= 1 and 0 < min_frequency <= max_frequency");
    }
    NoiseEmbedding e;
    e.frequencies.resize(static_cast<std::size_t>(n_frequencies));
    for (int k = 0; k < n_frequencies; ++k) {
        const double t = n_frequencies == 1 ? 0.0 : static_cast<double>(k) / (n_frequencies - 1);
        e.frequencies[static_cast<std::size_t>(k)] = min_frequency * std::pow(max_frequency / min_frequency, t);
    }
    if (n_frequencies > 1) {
        e.frequencies.back() = max_frequency;
    }
    return e;
}

void NoiseEmbedding::embed(double c_noise, std::span<double> out) const {
    const std::size_t n = frequencies.size();
    if (out.size() != 2 * n) {
        throw ContractViolation("noise embedding: output span has wrong size");
    }
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = std::sin(frequencies[k] * c_noise);
        out[n + k] = std::cos(frequencies[k] * c_noise);
    }
}

Eigen::VectorXd NoiseEmbedding::embed(double c_noise) const {
    Eigen::VectorXd out(dim());
    embed(c_noise, std::span<double>(out.data(), static_cast<std::size_t>(out.size())));
    return out;
}

void MlpArchitecture::validate() const {
    if (data_dim < 1) {
        throw ContractViolation("model data_dim must be positive");
    }
    for (int w : hidden) {
        if (w < 1) {
            throw ContractViolation("hidden layer widths must be positive");
        }
    }
    if (embedding.frequencies.empty()) {
        throw ContractViolation("noise embedding needs at least one frequency");
    }
}

MlpDenoiser::MlpDenoiser(MlpArchitecture arch) : arch_(std::move(arch)) {
    arch_.validate();
    Eigen::Index offset = 0;
    int in = arch_.input_dim();
    auto add = [&](int out) {
        layers_.push_back(Layer{in, out, offset});
        offset += static_cast<Eigen::Index>(in) * out + out;
        in = out;
    };
    for (int w : arch_.hidden) {
        add(w);
    }
    add(arch_.data_dim);
    params_ = Eigen::VectorXd::Zero(offset);
}

MlpDenoiser MlpDenoiser::initialized(MlpArchitecture arch, Rng& rng) {
    MlpDenoiser model(std::move(arch));
    const int last = model.layer_count() - 1;
    for (int l = 0; l <= last; ++l) {
        const double fan_in = model.layer_inputs(l);
        const double stddev = l == last ? std::sqrt(1e-2 / fan_in) : std::sqrt(2.0 / fan_in);
        auto w = model.mutable_weight(l);
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) {
                w(r, c) = stddev * standard_normal(rng);
            }
        }
    }
    return model;
}

Eigen::Map<const Eigen::MatrixXd> MlpDenoiser::weight(int layer) const {
    const auto& L = layers_.at(static_cast<std::size_t>(layer));
    return {params_.data() + L.offset, L.out, L.in};
}

Eigen::Map<const Eigen::VectorXd> MlpDenoiser::bias(int layer) const {
    const auto& L = layers_.at(static_cast<std::size_t>(layer));
    return {params_.data() + L.offset + static_cast<Eigen::Index>(L.in) * L.out, L.out};
}

Eigen::Map<Eigen::MatrixXd> MlpDenoiser::mutable_weight(int layer) {
    const auto& L = layers_.at(static_cast<std::size_t>(layer));
    ++version_;
    return {params_.data() + L.offset, L.out, L.in};
}

Eigen::Map<Eigen::VectorXd> MlpDenoiser::mutable_bias(int layer) {
    const auto& L = layers_.at(static_cast<std::size_t>(layer));
    ++version_;
    return {params_.data() + L.offset + static_cast<Eigen::Index>(L.in) * L.out, L.out};
}

Eigen::VectorXd& MlpDenoiser::mutable_parameters() noexcept {
    ++version_;
    return params_;
}

Eigen::MatrixXd MlpDenoiser::build_input(const Eigen::MatrixXd& x_in, std::span<const double> c_noise) const {
    if (x_in.rows() != arch_.data_dim) {
        throw ContractViolation("denoiser input has dimension " + std::to_string(x_in.rows()) + ", expected " +
                                std::to_string(arch_.data_dim));
    }
    if (static_cast<std::size_t>(x_in.cols()) != c_noise.size()) {
        throw ContractViolation("denoiser: one conditioning value per sample required");
    }
    Eigen::MatrixXd input(arch_.input_dim(), x_in.cols());
    input.topRows(arch_.data_dim) = x_in;
    const int e = arch_.embedding.dim();
    for (Eigen::Index j = 0; j < x_in.cols(); ++j) {
        arch_.embedding.embed(c_noise[static_cast<std::size_t>(j)],
                              std::span<double>(input.col(j).data() + arch_.data_dim, static_cast<std::size_t>(e)));
    }
    return input;
}

Eigen::VectorXd MlpDenoiser::forward(const Eigen::VectorXd& x_in, double c_noise) const {
    const Eigen::MatrixXd out = forward_batch(x_in, std::span<const double>(&c_noise, 1));
    return out.col(0);
}

Eigen::MatrixXd MlpDenoiser::forward_batch(const Eigen::MatrixXd& x_in, std::span<const double> c_noise) const {
    Eigen::MatrixXd h = build_input(x_in, c_noise);
    const int last = layer_count() - 1;
    for (int l = 0; l <= last; ++l) {
        Eigen::MatrixXd z = weight(l) * h;
        z.colwise() += bias(l);
        if (l < last) {
            h = silu(z);
        } else {
            return z;
        }
    }
    return h;
}

ForwardCache MlpDenoiser::forward_cached(const Eigen::MatrixXd& x_in, std::span<const double> c_noise) const {
    ForwardCache cache;
    cache.owner = this;
    cache.version = version_;
    cache.input = build_input(x_in, c_noise);
    const int last = layer_count() - 1;
    cache.pre.reserve(static_cast<std::size_t>(layer_count()));
    cache.activation.reserve(static_cast<std::size_t>(last));
    for (int l = 0; l <= last; ++l) {
        const Eigen::MatrixXd& h = l == 0 ? cache.input : cache.activation.back();
        Eigen::MatrixXd z = weight(l) * h;
        z.colwise() += bias(l);
        cache.pre.push_back(std::move(z));
        if (l < last) {
            cache.activation.push_back(silu(cache.pre.back()));
        }
    }
    return cache;
}

Eigen::VectorXd MlpDenoiser::backward(const ForwardCache& cache, const Eigen::MatrixXd& upstream) const {
    if (cache.owner != this || cache.version != version_ || cache.pre.size() != layers_.size()) {
        throw ContractViolation("backward: forward cache is stale or belongs to another model");
    }
    if (upstream.rows() != arch_.data_dim || upstream.cols() != cache.input.cols()) {
        throw ContractViolation("backward: upstream gradient shape does not match the forward batch");
    }
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(params_.size());
    Eigen::MatrixXd g = upstream;
    for (int l = layer_count() - 1; l >= 0; --l) {
        const auto& L = layers_[static_cast<std::size_t>(l)];
        const Eigen::MatrixXd& h_prev = l == 0 ? cache.input : cache.activation[static_cast<std::size_t>(l - 1)];
        Eigen::Map<Eigen::MatrixXd> gw(grad.data() + L.offset, L.out, L.in);
        Eigen::Map<Eigen::VectorXd> gb(grad.data() + L.offset + static_cast<Eigen::Index>(L.in) * L.out, L.out);
        gw.noalias() = g * h_prev.transpose();
        gb = g.rowwise().sum();
        if (l > 0) {
            Eigen::MatrixXd back = weight(l).transpose() * g;
            g = back.cwiseProduct(silu_grad(cache.pre[static_cast<std::size_t>(l - 1)]));
        }
    }
    return grad;
}

Eigen::VectorXd analytic_gaussian_denoiser(const Eigen::VectorXd& x_tilde, NoiseScale sigma, double sigma_data) {
    if (!(sigma_data > 0.0)) {
        throw DomainError("sigma_data must be positive");
    }
    const double d2 = sigma_data * sigma_data;
    const double s = sigma.value();
    return (d2 / (d2 + s * s)) * x_tilde;
}

}  // namespace alsr
