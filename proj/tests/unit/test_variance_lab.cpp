#include <cmath>
#include <fstream>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <alsr/errors.hpp>
#include <alsr/rng.hpp>
#include <alsr/variance_lab.hpp>

#include "oracles.hpp"

namespace {

using alsr::DiscretePopulation;
using alsr::Proposal;
using alsr::ProposalMode;

DiscretePopulation worked() {
    return {{-2.0, 2.0}, {0.5, 0.5}, {0.0, 0.0}, {1.0, 4.0}};
}

std::vector<DiscretePopulation> corpus() {
    std::ifstream in(std::string(ALSR_TEST_DATA_DIR) + "/populations.json");
    const auto doc = nlohmann::json::parse(in);
    std::vector<DiscretePopulation> out;
    for (const auto& p : doc.at("populations")) {
        out.push_back(alsr::population_from_json(p));
    }
    return out;
}

TEST(VarianceLab, Validation) {
    EXPECT_NO_THROW(worked().validate());
    EXPECT_THROW((DiscretePopulation{{0.0, 0.0}, {0.5, 0.5}, {0.0, 0.0}, {1.0, 1.0}}.validate()),
                 alsr::ContractViolation);
    EXPECT_THROW((DiscretePopulation{{0.0, 1.0}, {0.5, 0.6}, {0.0, 0.0}, {1.0, 1.0}}.validate()),
                 alsr::ContractViolation);
    EXPECT_THROW((DiscretePopulation{{0.0, 1.0}, {0.5, 0.5}, {0.0, 0.0}, {1.0, -1.0}}.validate()),
                 alsr::ContractViolation);
    EXPECT_THROW((DiscretePopulation{{0.0, 1.0}, {0.5, 0.5}, {0.0}, {1.0, 1.0}}.validate()), alsr::ContractViolation);
}

TEST(VarianceLab, DecompositionExamples) {
    const DiscretePopulation constant{{-1.0, 1.0}, {0.5, 0.5}, {3.0, 3.0}, {0.0, 0.0}};
    const auto c = alsr::total_variance_decompose(constant);
    EXPECT_EQ(c.within, 0.0);
    EXPECT_NEAR(c.between, 0.0, 1e-15);
    EXPECT_NEAR(c.total, 0.0, 1e-15);

    const auto w = alsr::total_variance_decompose(worked());
    EXPECT_EQ(w.within, 2.5);
    EXPECT_EQ(w.between, 0.0);
    EXPECT_EQ(w.total, 2.5);

    const DiscretePopulation between{{-1.0, 1.0}, {0.5, 0.5}, {-1.0, 1.0}, {0.0, 0.0}};
    const auto b = alsr::total_variance_decompose(between);
    EXPECT_EQ(b.within, 0.0);
    EXPECT_EQ(b.between, 1.0);
    EXPECT_EQ(b.total, 1.0);
}

TEST(VarianceLab, EstimatorVarianceExamples) {
    const auto pop = worked();
    EXPECT_DOUBLE_EQ(alsr::estimator_variance(pop, Proposal{pop.base_prob}, 1), 2.5);
    const Proposal p{{1.0 / 3.0, 2.0 / 3.0}};
    EXPECT_NEAR(alsr::estimator_variance(pop, p, 1), 2.25, 1e-15);
    EXPECT_EQ(alsr::estimator_variance(pop, p, 4), alsr::estimator_variance(pop, p, 1) / 4.0);
    EXPECT_THROW(alsr::estimator_variance(pop, Proposal{{1.0, 0.0}}, 1), alsr::AbsoluteContinuityError);
    EXPECT_THROW(alsr::estimator_variance(pop, Proposal{{1.0}}, 1), alsr::ContractViolation);
    EXPECT_THROW(alsr::estimator_variance(pop, p, 0), alsr::ContractViolation);
}

TEST(VarianceLab, OptimalProposalExamples) {
    const auto pop = worked();
    const auto cond = alsr::optimal_proposal(pop, ProposalMode::CondStd);
    const auto full = alsr::optimal_proposal(pop, ProposalMode::FullSecondMoment);
    EXPECT_NEAR(cond.probs[0], 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(cond.probs[1], 2.0 / 3.0, 1e-15);
    EXPECT_EQ(cond.probs, full.probs);

    const DiscretePopulation flat{{-1.0, 0.0, 1.0}, {0.25, 0.5, 0.25}, {0.0, 0.0, 0.0}, {2.0, 2.0, 2.0}};
    const auto p = alsr::optimal_proposal(flat, ProposalMode::CondStd);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_NEAR(p.probs[i], flat.base_prob[i], 1e-15);
    }

    const DiscretePopulation degenerate{{-1.0, 1.0}, {0.5, 0.5}, {0.0, 0.0}, {0.0, 0.0}};
    EXPECT_THROW(alsr::optimal_proposal(degenerate, ProposalMode::FullSecondMoment), alsr::DegeneratePopulation);
}

TEST(VarianceLab, WorkedExampleBruteForce) {
    const auto r = alsr::verify_optimality(worked(), 1000);
    EXPECT_NEAR(r.lattice_minimizer.probs[0], 1.0 / 3.0, 1e-3);
    EXPECT_NEAR(r.lattice_minimizer.probs[1], 2.0 / 3.0, 1e-3);
    EXPECT_NEAR(r.lattice_min_variance, 2.25, 1e-4);
    EXPECT_TRUE(r.optimum_attains_lattice_minimum);
    EXPECT_EQ(r.base_variance, 2.5);
}

TEST(VarianceLab, NonzeroMeanSeparatesTheTwoModes) {
    const DiscretePopulation pop{{-4.0, 0.0, 4.0}, {0.25, 0.25, 0.5}, {3.0, 0.0, -1.0}, {0.5, 2.0, 1.0}};
    const auto r = alsr::verify_optimality(pop, 100);
    ASSERT_TRUE(r.distance_to_cond_std.has_value());
    EXPECT_LT(r.distance_to_full_second_moment, *r.distance_to_cond_std);
    EXPECT_LE(r.distance_to_full_second_moment, 1.0 / 100.0);
    ASSERT_TRUE(r.cond_std_variance.has_value());
    EXPECT_LT(r.full_second_moment_variance, *r.cond_std_variance);
}

TEST(VarianceLab, ConstantVarianceMinimizerIsBase) {
    const DiscretePopulation pop{{-1.0, 0.0, 1.0}, {0.25, 0.5, 0.25}, {0.0, 0.0, 0.0}, {2.0, 2.0, 2.0}};
    const auto r = alsr::verify_optimality(pop, 100);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_NEAR(r.lattice_minimizer.probs[i], pop.base_prob[i], 1e-12);
    }
    EXPECT_NEAR(r.lattice_min_variance, r.base_variance, 1e-12);
}

TEST(VarianceLab, RejectsLargeGrids) {
    const DiscretePopulation pop{{0, 1, 2, 3, 4}, {0.2, 0.2, 0.2, 0.2, 0.2}, {0, 0, 0, 0, 0}, {1, 1, 1, 1, 1}};
    EXPECT_THROW(alsr::verify_optimality(pop, 10), alsr::UnsupportedSize);
    EXPECT_EQ(alsr::default_lattice_resolution(2), 1000);
    EXPECT_EQ(alsr::default_lattice_resolution(3), 100);
    EXPECT_EQ(alsr::default_lattice_resolution(4), 40);
}

// The oracle enumerates the joint (lambda, g) law directly.
TEST(VarianceLab, CorpusMatchesEnumerationOracle) {
    const auto pops = corpus();
    ASSERT_GE(pops.size(), 20u);
    for (const auto& pop : pops) {
        const auto d = alsr::total_variance_decompose(pop);
        const double direct = oracle::joint_variance(pop);
        EXPECT_LE(std::abs(d.total - direct), 1e-12 * std::max(1.0, std::abs(direct)));
        EXPECT_EQ(d.total, d.within + d.between);

        for (ProposalMode mode : {ProposalMode::CondStd, ProposalMode::FullSecondMoment}) {
            Proposal p;
            try {
                p = alsr::optimal_proposal(pop, mode);
            } catch (const alsr::DegeneratePopulation&) {
                continue;
            }
            if (!oracle::absolutely_continuous(pop, p.probs)) {
                continue;
            }
            const auto m = oracle::importance_draw_moments(pop, p.probs);
            const double target = oracle::target_mean(pop);
            EXPECT_LE(std::abs(m.mean - target), 1e-12 * std::max(1.0, std::abs(target)));
            const double v = alsr::estimator_variance(pop, p, 1);
            EXPECT_LE(std::abs(v - m.variance), 1e-12 * std::max(1.0, std::abs(m.variance)));
        }
    }
}

TEST(VarianceLab, OptimumBeatsBaseAndLattice) {
    for (const auto& pop : corpus()) {
        if (pop.size() > 3) {
            continue;  // the acceptance suite covers the 4-point grids
        }
        const int res = pop.size() == 2 ? 1000 : 60;
        const auto full = alsr::optimal_proposal(pop, ProposalMode::FullSecondMoment);
        const double best = alsr::estimator_variance(pop, full, 1);
        EXPECT_LE(best, alsr::estimator_variance(pop, Proposal{pop.base_prob}, 1) * (1.0 + 1e-12) + 1e-15);
        const auto brute = oracle::lattice_minimum(pop, res);
        EXPECT_LE(best, brute.variance + 1e-12 * std::max(1.0, brute.variance));
    }
}

TEST(VarianceLab, ImportanceEstimateDeterministicIntegrand) {
    // v = 0: each draw is exact given lambda, so only the grid sampling varies.
    const DiscretePopulation pop{{-1.0, 0.5, 2.0}, {0.5, 0.25, 0.25}, {1.0, 2.0, -1.0}, {0.0, 0.0, 0.0}};
    const Proposal p{{0.2, 0.3, 0.5}};
    alsr::Rng rng(41);
    const std::uint64_t n = 100000;
    const double est = alsr::importance_estimate(pop, p, n, rng);
    const double se = std::sqrt(alsr::estimator_variance(pop, p, n));
    EXPECT_LT(std::abs(est - alsr::population_mean(pop)), 3.0 * se);
}

TEST(VarianceLab, ReplicatedEstimatesMatchClosedForm) {
    const DiscretePopulation pop{{-4.0, 0.0, 4.0}, {0.25, 0.25, 0.5}, {3.0, 0.0, -1.0}, {0.5, 2.0, 1.0}};
    for (const Proposal& p : {Proposal{pop.base_prob}, alsr::optimal_proposal(pop, ProposalMode::FullSecondMoment)}) {
        alsr::Rng rng(42);
        const int reps = 100000;
        std::vector<double> draws(reps);
        for (double& d : draws) {
            d = alsr::importance_estimate(pop, p, 1, rng);
        }
        const auto m = oracle::two_pass(draws);
        const double var = alsr::estimator_variance(pop, p, 1);
        EXPECT_LT(std::abs(m.mean - alsr::population_mean(pop)), 3.0 * std::sqrt(var / reps));
        EXPECT_LT(oracle::relative_error(m.variance, var), 0.05);
    }
}

TEST(VarianceLab, ReportJson) {
    const auto j = alsr::variance_lab_report(worked(), 1000, 1);
    const std::string text = j.dump();
    for (const char* key : {"population", "decomposition", "lattice_minimizer", "full_second_moment_variance"}) {
        EXPECT_NE(text.find(key), std::string::npos) << key;
    }
    const auto back = alsr::population_from_json(nlohmann::json::parse(alsr::to_json(worked()).dump()));
    EXPECT_EQ(back.cond_var, worked().cond_var);
}

}  // namespace
