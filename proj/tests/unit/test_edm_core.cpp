#include <cmath>

#include <gtest/gtest.h>

#include <alsr/denoiser_model.hpp>
#include <alsr/edm_core.hpp>
#include <alsr/errors.hpp>
#include <alsr/rng.hpp>

#include "oracles.hpp"

namespace {

using alsr::NoiseScale;

TEST(EdmCore, SymmetricPoint) {
    const auto c = alsr::precondition(NoiseScale(0.5), 0.5);
    EXPECT_DOUBLE_EQ(c.c_skip, 0.5);
}

TEST(EdmCore, WorkedCoefficients) {
    // sigma = 1, sigma_data = 0.5: c_out = 0.5 / sqrt(1.25), c_in = 1 / sqrt(1.25).
    const auto c = alsr::precondition(NoiseScale(1.0), 0.5);
    EXPECT_NEAR(c.c_skip, 0.2, 1e-15);
    EXPECT_NEAR(c.c_out, 0.44721359549995793928, 1e-15);
    EXPECT_NEAR(c.c_in, 0.89442719099991587856, 1e-15);
    EXPECT_NEAR(c.w_edm, 5.0, 1e-14);
}

TEST(EdmCore, LossWeightCancelsOutputScale) {
    alsr::Rng rng(3);
    std::uniform_real_distribution<double> u(std::log(1e-4), std::log(1e4));
    for (int i = 0; i < 1000; ++i) {
        const auto c = alsr::precondition(NoiseScale(std::exp(u(rng))), std::exp(u(rng) / 4.0));
        EXPECT_LT(std::abs(c.w_edm * c.c_out * c.c_out - 1.0), 1e-12);
    }
}

TEST(EdmCore, Limits) {
    for (double sd : {0.1, 0.5, 2.0}) {
        const auto small = alsr::precondition(NoiseScale(1e-6), sd);
        const auto large = alsr::precondition(NoiseScale(1e6), sd);
        EXPECT_NEAR(small.c_skip, 1.0, 1e-6);
        EXPECT_NEAR(small.c_out, 0.0, 1e-6);
        EXPECT_NEAR(large.c_skip, 0.0, 1e-6);
    }
}

TEST(EdmCore, RejectsBadSigmaData) {
    EXPECT_THROW(alsr::precondition(NoiseScale(1.0), 0.0), alsr::DomainError);
    EXPECT_THROW(alsr::precondition(NoiseScale(1.0), -0.5), alsr::DomainError);
}

TEST(EdmCore, NoiseConditioning) {
    EXPECT_DOUBLE_EQ(alsr::noise_conditioning(NoiseScale(1.0)), 0.0);
    EXPECT_NEAR(alsr::noise_conditioning(NoiseScale(std::exp(2.0))), 0.5, 1e-15);
}

TEST(EdmCore, NoisySampleConstruction) {
    Eigen::VectorXd x(2);
    x << 1.0, -2.0;
    Eigen::VectorXd eps(2);
    eps << 0.5, 0.25;
    const alsr::NoisySample s(x, eps, NoiseScale(2.0));
    EXPECT_EQ(s.x_tilde()[0], 2.0);
    EXPECT_EQ(s.x_tilde()[1], -1.5);
    EXPECT_THROW(alsr::NoisySample(x, Eigen::VectorXd::Zero(3), NoiseScale(1.0)), alsr::ContractViolation);
}

alsr::NoisySample random_sample(alsr::Rng& rng, int dim, double sigma) {
    Eigen::VectorXd x(dim);
    Eigen::VectorXd eps(dim);
    for (int i = 0; i < dim; ++i) {
        x[i] = alsr::standard_normal(rng);
        eps[i] = alsr::standard_normal(rng);
    }
    return alsr::NoisySample(x, eps, NoiseScale(sigma));
}

TEST(EdmCore, ZeroModelIsSkipPath) {
    alsr::Rng rng(4);
    const auto s = random_sample(rng, 3, 0.7);
    const auto c = alsr::precondition(s.sigma(), 0.5);
    const alsr::RawModel zero = [](const Eigen::VectorXd& in, double) { return Eigen::VectorXd::Zero(in.size()); };
    const Eigen::VectorXd d = alsr::denoise(zero, s, c);
    EXPECT_TRUE(d.isApprox(c.c_skip * s.x_tilde()));
}

TEST(EdmCore, ConstantModel) {
    alsr::Rng rng(5);
    const auto s = random_sample(rng, 2, 1.3);
    const auto c = alsr::precondition(s.sigma(), 0.5);
    Eigen::VectorXd k(2);
    k << 0.3, -0.9;
    const alsr::RawModel constant = [&](const Eigen::VectorXd&, double) { return k; };
    const Eigen::VectorXd d = alsr::denoise(constant, s, c);
    EXPECT_TRUE(d.isApprox(c.c_skip * s.x_tilde() + c.c_out * k));
}

TEST(EdmCore, ModelSeesScaledInputAndConditioning) {
    alsr::Rng rng(6);
    const auto s = random_sample(rng, 2, 0.9);
    const auto c = alsr::precondition(s.sigma(), 0.5);
    Eigen::VectorXd seen_input;
    double seen_noise = 0.0;
    const alsr::RawModel probe = [&](const Eigen::VectorXd& in, double cn) {
        seen_input = in;
        seen_noise = cn;
        return Eigen::VectorXd::Zero(in.size()).eval();
    };
    alsr::denoise(probe, s, c);
    EXPECT_TRUE(seen_input.isApprox(c.c_in * s.x_tilde()));
    EXPECT_DOUBLE_EQ(seen_noise, std::log(0.9) / 4.0);
}

TEST(EdmCore, DenoiseRejectsWrongModelOutput) {
    alsr::Rng rng(7);
    const auto s = random_sample(rng, 2, 0.9);
    const auto c = alsr::precondition(s.sigma(), 0.5);
    const alsr::RawModel wrong = [](const Eigen::VectorXd&, double) { return Eigen::VectorXd::Zero(3).eval(); };
    EXPECT_THROW(alsr::denoise(wrong, s, c), alsr::ContractViolation);
}

TEST(EdmCore, AnalyticModelGivesPosteriorMean) {
    alsr::Rng rng(8);
    const double sd = 0.5;
    for (double sigma : {0.01, 0.3, 1.0, 7.0}) {
        const auto s = random_sample(rng, 2, sigma);
        const auto c = alsr::precondition(s.sigma(), sd);
        // Raw output that makes D the posterior mean: r = (D* - c_skip x~) / c_out.
        const alsr::RawModel optimal = [&](const Eigen::VectorXd& in, double) {
            const Eigen::VectorXd xt = in / c.c_in;
            return ((alsr::analytic_gaussian_denoiser(xt, s.sigma(), sd) - c.c_skip * xt) / c.c_out).eval();
        };
        const Eigen::VectorXd d = alsr::denoise(optimal, s, c);
        const Eigen::VectorXd want = sd * sd / (sd * sd + sigma * sigma) * s.x_tilde();
        EXPECT_LT((d - want).cwiseAbs().maxCoeff(), 1e-6);
    }
}

TEST(EdmCore, DenoiseIsAffineInModelOutput) {
    alsr::Rng rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        const auto s = random_sample(rng, 3, 0.2 + trial * 0.1);
        const auto c = alsr::precondition(s.sigma(), 0.5);
        Eigen::VectorXd fa = Eigen::VectorXd::Random(3);
        Eigen::VectorXd fb = Eigen::VectorXd::Random(3);
        const double a = alsr::standard_normal(rng);
        const double b = alsr::standard_normal(rng);
        const alsr::RawModel f = [&](const Eigen::VectorXd&, double) { return fa; };
        const alsr::RawModel g = [&](const Eigen::VectorXd&, double) { return fb; };
        const alsr::RawModel mix = [&](const Eigen::VectorXd&, double) { return (a * fa + b * fb).eval(); };
        const Eigen::VectorXd lhs = alsr::denoise(mix, s, c);
        const Eigen::VectorXd rhs =
            a * alsr::denoise(f, s, c) + b * alsr::denoise(g, s, c) - (a + b - 1.0) * c.c_skip * s.x_tilde();
        EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(EdmCore, LossExamples) {
    const auto c = alsr::precondition(NoiseScale(1.0), 0.5);
    Eigen::VectorXd x(2);
    x << 0.4, -0.2;
    EXPECT_EQ(alsr::per_sample_edm_loss(x, x, c), 0.0);
    Eigen::VectorXd d = x;
    d[0] += 0.1;
    EXPECT_NEAR(alsr::per_sample_edm_loss(d, x, c), 0.05, 1e-13);
    const Eigen::VectorXd d3 = x + 3.0 * (d - x);
    EXPECT_NEAR(alsr::per_sample_edm_loss(d3, x, c), 9.0 * 0.05, 1e-12);
    EXPECT_THROW(alsr::per_sample_edm_loss(Eigen::VectorXd::Zero(3), x, c), alsr::ContractViolation);
}

TEST(EdmCore, LossIsNonNegative) {
    alsr::Rng rng(10);
    for (int i = 0; i < 1000; ++i) {
        const auto c = alsr::precondition(NoiseScale(std::exp(alsr::standard_normal(rng))), 0.5);
        Eigen::VectorXd a(2);
        Eigen::VectorXd b(2);
        a << alsr::standard_normal(rng), alsr::standard_normal(rng);
        b << alsr::standard_normal(rng), alsr::standard_normal(rng);
        EXPECT_GT(alsr::per_sample_edm_loss(a, b, c), 0.0);
    }
}

}  // namespace
