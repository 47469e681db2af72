#include "alsr/adam.hpp"

#include <cmath>

#include "alsr/errors.hpp"

namespace alsr {

void AdamHyper::validate() const {
    if (!(learning_rate >= 0.0) || !(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0) ||
        !(epsilon > 0.0)) {
        throw ContractViolation("adam: need lr >= 0, betas in [0, 1), epsilon > 0");
    }
}

void adam_update(Eigen::Ref<Eigen::VectorXd> params, const Eigen::Ref<const Eigen::VectorXd>& grads,
                 AdamState& state, const AdamHyper& hyper) {
    if (params.size() != grads.size() || state.first_moment.size() != params.size() ||
        state.second_moment.size() != params.size()) {
        throw ContractViolation("adam_update: parameter, gradient and state sizes differ");
    }
    hyper.validate();
    ++state.step;
    const double t = static_cast<double>(state.step);
    const double bc1 = 1.0 - std::pow(hyper.beta1, t);
    const double bc2 = 1.0 - std::pow(hyper.beta2, t);
    state.first_moment = hyper.beta1 * state.first_moment + (1.0 - hyper.beta1) * grads;
    state.second_moment = hyper.beta2 * state.second_moment + (1.0 - hyper.beta2) * grads.cwiseAbs2();
    const double lr = hyper.learning_rate;
    const double eps = hyper.epsilon;
    for (Eigen::Index i = 0; i < params.size(); ++i) {
        const double m_hat = state.first_moment[i] / bc1;
        const double v_hat = state.second_moment[i] / bc2;
        params[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
    }
}

}  // namespace alsr
