#include "alsr/ode_sampler.hpp"

#include <cmath>
#include <string>

#include "alsr/edm_core.hpp"
#include "alsr/errors.hpp"

namespace alsr {
namespace {

constexpr Eigen::Index kChunk = 2048;

}  // namespace

void SigmaSchedule::validate() const {
    if (!(sigma_max > sigma_min) || !(sigma_min > 0.0) || n_steps < 0 || !(rho > 0.0)) {
        throw ContractViolation("sigma schedule needs sigma_max > sigma_min > 0, n_steps >= 0, rho > 0");
    }
}

std::vector<double> SigmaSchedule::levels() const {
    validate();
    std::vector<double> out;
    if (n_steps == 0) {
        return out;
    }
    const double hi = std::pow(sigma_max, 1.0 / rho);
    const double lo = std::pow(sigma_min, 1.0 / rho);
    for (int i = 0; i < n_steps; ++i) {
        const double t = n_steps == 1 ? 0.0 : static_cast<double>(i) / (n_steps - 1);
        out.push_back(std::pow(hi + t * (lo - hi), rho));
    }
    out.push_back(0.0);
    return out;
}

BatchDenoiser make_model_denoiser(const MlpDenoiser& model, double sigma_data) {
    return [&model, sigma_data](const Eigen::MatrixXd& x, double sigma) {
        const NoiseScale s(sigma);
        const auto coeffs = precondition(s, sigma_data);
        Eigen::MatrixXd out(x.rows(), x.cols());
        for (Eigen::Index start = 0; start < x.cols(); start += kChunk) {
            const Eigen::Index len = std::min(kChunk, x.cols() - start);
            const std::vector<double> c_noise(static_cast<std::size_t>(len), noise_conditioning(s));
            const Eigen::MatrixXd input = coeffs.c_in * x.middleCols(start, len);
            const Eigen::MatrixXd r = model.forward_batch(input, c_noise);
            out.middleCols(start, len) = coeffs.c_skip * x.middleCols(start, len) + coeffs.c_out * r;
        }
        return out;
    };
}

BatchDenoiser make_analytic_denoiser(double sigma_data) {
    return [sigma_data](const Eigen::MatrixXd& x, double sigma) {
        const double d2 = sigma_data * sigma_data;
        return Eigen::MatrixXd((d2 / (d2 + sigma * sigma)) * x);
    };
}

Eigen::MatrixXd ode_sample(const BatchDenoiser& denoiser, const SigmaSchedule& schedule, std::size_t n, int dim,
                           Rng& rng) {
    const auto levels = schedule.levels();
    if (dim < 1) {
        throw ContractViolation("ode_sample: dim must be positive");
    }
    Eigen::MatrixXd x(dim, static_cast<Eigen::Index>(n));
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        for (int i = 0; i < dim; ++i) {
            x(i, j) = schedule.sigma_max * standard_normal(rng);
        }
    }
    for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
        const double s_cur = levels[i];
        const double s_next = levels[i + 1];
        const Eigen::MatrixXd d_cur = (x - denoiser(x, s_cur)) / s_cur;
        Eigen::MatrixXd x_next = x + (s_next - s_cur) * d_cur;
        if (s_next > 0.0) {
            const Eigen::MatrixXd d_next = (x_next - denoiser(x_next, s_next)) / s_next;
            x_next = x + (s_next - s_cur) * (0.5 * d_cur + 0.5 * d_next);
        }
        if (!x_next.allFinite()) {
            throw SamplingError("ode_sample: non-finite state after the step from sigma " + std::to_string(s_cur),
                                s_cur);
        }
        x = std::move(x_next);
    }
    return x;
}

}  // namespace alsr
