#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "alsr/rng.hpp"

namespace alsr {

struct GaussianIso {
    int dim = 2;
    double sigma_data = 0.5;
};

/// Equal-weight mixture of isotropic Gaussians.
struct GaussianMixture {
    std::vector<Eigen::VectorXd> centers;
    double component_std = 0.2;
};

/// Two interleaved half circles, centered at the origin and scaled by 1/2.
struct TwoMoons {
    double noise_std = 0.05;
};

/// Uniform over the dark cells of a cells x cells board on [-1, 1]^2.
struct Checkerboard {
    int cells = 4;
};

using DatasetVariant = std::variant<GaussianIso, GaussianMixture, TwoMoons, Checkerboard>;

struct DatasetSpec {
    DatasetVariant variant = GaussianIso{};
    std::size_t n_train = 20000;

    void validate() const;
};

int dataset_dim(const DatasetVariant& variant);

/// n samples from the dataset law, one sample per column.
Eigen::MatrixXd sample_dataset(const DatasetVariant& variant, std::size_t n, Rng& rng);

/// spec.n_train samples, one per column.
Eigen::MatrixXd generate_dataset(const DatasetSpec& spec, Rng& rng);

}  // namespace alsr
