#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace alsr {

struct AdamHyper {
    double learning_rate = 2e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    void validate() const;
};

struct AdamState {
    Eigen::VectorXd first_moment;
    Eigen::VectorXd second_moment;
    std::uint64_t step = 0;

    explicit AdamState(Eigen::Index n = 0)
        : first_moment(Eigen::VectorXd::Zero(n)), second_moment(Eigen::VectorXd::Zero(n)) {}
};

/// One bias-corrected Adam step applied in place.
void adam_update(Eigen::Ref<Eigen::VectorXd> params, const Eigen::Ref<const Eigen::VectorXd>& grads,
                 AdamState& state, const AdamHyper& hyper);

}  // namespace alsr
