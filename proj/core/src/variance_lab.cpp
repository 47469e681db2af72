#include "alsr/variance_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "alsr/errors.hpp"

namespace alsr {
namespace {

void check_proposal(const DiscretePopulation& pop, const Proposal& prop) {
    if (prop.probs.size() != pop.size()) {
        throw ContractViolation("proposal has " + std::to_string(prop.probs.size()) + " entries, population has " +
                                std::to_string(pop.size()));
    }
    for (std::size_t i = 0; i < pop.size(); ++i) {
        if (!(prop.probs[i] >= 0.0)) {
            throw ContractViolation("proposal entries must be non-negative");
        }
        if (pop.base_prob[i] > 0.0 && prop.probs[i] <= 0.0) {
            throw AbsoluteContinuityError("proposal is zero at grid point " + std::to_string(i) +
                                          " where the base probability is positive");
        }
    }
}

Proposal normalized(std::vector<double> w) {
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    if (!(total > 0.0)) {
        throw DegeneratePopulation("all proposal weights are zero");
    }
    for (double& x : w) {
        x /= total;
    }
    return Proposal{std::move(w)};
}

double max_abs_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d = std::max(d, std::abs(a[i] - b[i]));
    }
    return d;
}

std::vector<double> json_reals(const nlohmann::json& doc, const char* key) {
    if (!doc.contains(key) || !doc.at(key).is_array()) {
        throw ConfigError(std::string("population is missing array '") + key + "'");
    }
    return doc.at(key).get<std::vector<double>>();
}

}  // namespace

void DiscretePopulation::validate() const {
    const auto n = lambdas.size();
    if (n == 0) {
        throw ContractViolation("population is empty");
    }
    if (base_prob.size() != n || cond_mean.size() != n || cond_var.size() != n) {
        throw ContractViolation("population arrays have different lengths");
    }
    auto sorted = lambdas;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw ContractViolation("population grid points must be distinct");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(base_prob[i] >= 0.0) || !(cond_var[i] >= 0.0) || !std::isfinite(cond_mean[i]) ||
            !std::isfinite(cond_var[i]) || !std::isfinite(lambdas[i])) {
            throw ContractViolation("population entries must be finite with non-negative probabilities and variances");
        }
        total += base_prob[i];
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw ContractViolation("base probabilities sum to " + std::to_string(total) + ", expected 1");
    }
}

VarianceDecomposition total_variance_decompose(const DiscretePopulation& pop) {
    pop.validate();
    double within = 0.0;
    double second = 0.0;
    double first = 0.0;
    for (std::size_t i = 0; i < pop.size(); ++i) {
        const double q = pop.base_prob[i];
        within += q * pop.cond_var[i];
        second += q * pop.cond_mean[i] * pop.cond_mean[i];
        first += q * pop.cond_mean[i];
    }
    const double between = std::max(0.0, second - first * first);
    return VarianceDecomposition{within, between, within + between};
}

double population_mean(const DiscretePopulation& pop) {
    pop.validate();
    double mean = 0.0;
    for (std::size_t i = 0; i < pop.size(); ++i) {
        mean += pop.base_prob[i] * pop.cond_mean[i];
    }
    return mean;
}

double estimator_variance(const DiscretePopulation& pop, const Proposal& prop, std::uint64_t n) {
    pop.validate();
    check_proposal(pop, prop);
    if (n == 0) {
        throw ContractViolation("estimator_variance: n must be positive");
    }
    double mean = 0.0;
    for (std::size_t i = 0; i < pop.size(); ++i) {
        mean += pop.base_prob[i] * pop.cond_mean[i];
    }
    // E_p[r^2 v] + Var_p(r m) with r = q / p; a sum of non-negative terms, so
    // large conditional means do not cancel.
    double var = 0.0;
    for (std::size_t i = 0; i < pop.size(); ++i) {
        const double p = prop.probs[i];
        if (p == 0.0) {
            continue;
        }
        const double r = pop.base_prob[i] / p;
        const double dev = r * pop.cond_mean[i] - mean;
        var += p * (r * r * pop.cond_var[i] + dev * dev);
    }
    return var / static_cast<double>(n);
}

Proposal optimal_proposal(const DiscretePopulation& pop, ProposalMode mode) {
    pop.validate();
    std::vector<double> w(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) {
        const double m = pop.cond_mean[i];
        const double moment = mode == ProposalMode::CondStd ? pop.cond_var[i] : pop.cond_var[i] + m * m;
        w[i] = pop.base_prob[i] * std::sqrt(moment);
    }
    return normalized(std::move(w));
}

int default_lattice_resolution(std::size_t grid_size) {
    switch (grid_size) {
        case 1:
        case 2:
            return 1000;
        case 3:
            return 100;
        default:
            return 40;
    }
}

OptimalityReport verify_optimality(const DiscretePopulation& pop, int resolution, std::uint64_t n) {
    pop.validate();
    const std::size_t k = pop.size();
    if (k > 4) {
        throw UnsupportedSize("exhaustive simplex search supports at most 4 grid points, got " + std::to_string(k));
    }
    if (resolution < 1) {
        throw ContractViolation("lattice resolution must be positive");
    }

    OptimalityReport report;
    report.resolution = resolution;
    report.lattice_min_variance = std::numeric_limits<double>::infinity();

    // Enumerate compositions of `resolution` into k non-negative parts in lexicographic order.
    std::vector<int> parts(k, 0);
    Proposal candidate{std::vector<double>(k, 0.0)};
    auto visit = [&]() {
        for (std::size_t i = 0; i < k; ++i) {
            if (pop.base_prob[i] > 0.0 && parts[i] == 0) {
                return;
            }
            candidate.probs[i] = static_cast<double>(parts[i]) / resolution;
        }
        const double var = estimator_variance(pop, candidate, n);
        ++report.lattice_points;
        if (var < report.lattice_min_variance) {
            report.lattice_min_variance = var;
            report.lattice_minimizer = candidate;
        }
    };
    auto recurse = [&](auto&& self, std::size_t index, int remaining) -> void {
        if (index + 1 == k) {
            parts[index] = remaining;
            visit();
            return;
        }
        for (int c = 0; c <= remaining; ++c) {
            parts[index] = c;
            self(self, index + 1, remaining - c);
        }
    };
    recurse(recurse, 0, resolution);
    if (report.lattice_points == 0) {
        throw DegeneratePopulation("no lattice proposal satisfies absolute continuity; raise the resolution");
    }

    report.full_second_moment = optimal_proposal(pop, ProposalMode::FullSecondMoment);
    report.full_second_moment_variance = estimator_variance(pop, report.full_second_moment, n);
    try {
        report.cond_std = optimal_proposal(pop, ProposalMode::CondStd);
        report.cond_std_variance = estimator_variance(pop, *report.cond_std, n);
    } catch (const DegeneratePopulation&) {
    } catch (const AbsoluteContinuityError&) {
    }
    report.base_variance = estimator_variance(pop, Proposal{pop.base_prob}, n);
    report.discretization_gap = report.lattice_min_variance - report.full_second_moment_variance;
    report.distance_to_full_second_moment =
        max_abs_distance(report.lattice_minimizer.probs, report.full_second_moment.probs);
    if (report.cond_std) {
        report.distance_to_cond_std = max_abs_distance(report.lattice_minimizer.probs, report.cond_std->probs);
    }
    const double tolerance = 1e-12 * std::max(1.0, std::abs(report.lattice_min_variance));
    report.optimum_attains_lattice_minimum =
        report.full_second_moment_variance <= report.lattice_min_variance + tolerance;
    return report;
}

double importance_estimate(const DiscretePopulation& pop, const Proposal& prop, std::uint64_t n, Rng& rng) {
    pop.validate();
    check_proposal(pop, prop);
    if (n == 0) {
        throw ContractViolation("importance_estimate: n must be positive");
    }
    std::discrete_distribution<std::size_t> pick(prop.probs.begin(), prop.probs.end());
    double sum = 0.0;
    for (std::uint64_t s = 0; s < n; ++s) {
        const std::size_t i = pick(rng);
        const double g = pop.cond_mean[i] + std::sqrt(pop.cond_var[i]) * standard_normal(rng);
        sum += (pop.base_prob[i] / prop.probs[i]) * g;
    }
    return sum / static_cast<double>(n);
}

DiscretePopulation population_from_json(const nlohmann::json& doc) {
    DiscretePopulation pop{json_reals(doc, "lambdas"), json_reals(doc, "base_prob"), json_reals(doc, "cond_mean"),
                           json_reals(doc, "cond_var")};
    pop.validate();
    return pop;
}

nlohmann::ordered_json to_json(const DiscretePopulation& pop) {
    nlohmann::ordered_json j;
    j["lambdas"] = pop.lambdas;
    j["base_prob"] = pop.base_prob;
    j["cond_mean"] = pop.cond_mean;
    j["cond_var"] = pop.cond_var;
    return j;
}

nlohmann::ordered_json to_json(const OptimalityReport& r) {
    nlohmann::ordered_json j;
    j["resolution"] = r.resolution;
    j["lattice_points"] = r.lattice_points;
    j["lattice_minimizer"] = r.lattice_minimizer.probs;
    j["lattice_min_variance"] = r.lattice_min_variance;
    j["full_second_moment_variance"] = r.full_second_moment_variance;
    j["cond_std_variance"] =
        r.cond_std_variance ? nlohmann::ordered_json(*r.cond_std_variance) : nlohmann::ordered_json(nullptr);
    j["base_variance"] = r.base_variance;
    j["discretization_gap"] = r.discretization_gap;
    j["distance_to_full_second_moment"] = r.distance_to_full_second_moment;
    j["distance_to_cond_std"] =
        r.distance_to_cond_std ? nlohmann::ordered_json(*r.distance_to_cond_std) : nlohmann::ordered_json(nullptr);
    j["optimum_attains_lattice_minimum"] = r.optimum_attains_lattice_minimum;
    return j;
}

nlohmann::ordered_json variance_lab_report(const DiscretePopulation& pop, int resolution, std::uint64_t n) {
    const auto dec = total_variance_decompose(pop);
    nlohmann::ordered_json j;
    j["population"] = to_json(pop);
    j["n"] = n;
    j["decomposition"] = {{"within", dec.within}, {"between", dec.between}, {"total", dec.total}};
    const auto fsm = optimal_proposal(pop, ProposalMode::FullSecondMoment);
    std::optional<Proposal> cond;
    try {
        cond = optimal_proposal(pop, ProposalMode::CondStd);
    } catch (const DegeneratePopulation&) {
    }
    j["optimal_proposals"] = {{"cond_std", cond ? nlohmann::ordered_json(cond->probs) : nlohmann::ordered_json(nullptr)},
                              {"full_second_moment", fsm.probs}};

    nlohmann::ordered_json table = nlohmann::ordered_json::array();
    auto row = [&](const char* name, const Proposal& p) {
        nlohmann::ordered_json entry{{"proposal", name}, {"probs", p.probs}};
        try {
            entry["variance"] = estimator_variance(pop, p, n);
        } catch (const AbsoluteContinuityError&) {
            entry["variance"] = nullptr;
        }
        table.push_back(entry);
    };
    row("base", Proposal{pop.base_prob});
    if (cond) {
        row("cond_std", *cond);
    }
    row("full_second_moment", fsm);
    j["variance_table"] = table;

    if (pop.size() <= 4) {
        j["lattice"] = to_json(verify_optimality(pop, resolution, n));
    } else {
        j["lattice"] = nullptr;
    }
    return j;
}

}  // namespace alsr
