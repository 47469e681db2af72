#include "alsr/datasets.hpp"

#include <cmath>
#include <numbers>

#include "alsr/errors.hpp"

namespace alsr {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};

}  // namespace

void DatasetSpec::validate() const {
    if (n_train == 0) {
        throw ContractViolation("dataset n_train must be positive");
    }
    std::visit(Overloaded{
                   [](const GaussianIso& g) {
                       if (g.dim < 1 || !(g.sigma_data > 0.0)) {
                           throw ContractViolation("gaussian_iso needs dim >= 1 and sigma > 0");
                       }
                   },
                   [](const GaussianMixture& g) {
                       if (g.centers.empty() || !(g.component_std > 0.0)) {
                           throw ContractViolation("gaussian_mixture needs centers and component_std > 0");
                       }
                       for (const auto& c : g.centers) {
                           if (c.size() != g.centers.front().size() || c.size() == 0) {
                               throw ContractViolation("gaussian_mixture centers must share one dimension");
                           }
                       }
                   },
                   [](const TwoMoons& m) {
                       if (!(m.noise_std > 0.0)) {
                           throw ContractViolation("two_moons needs noise_std > 0");
                       }
                   },
                   [](const Checkerboard& c) {
                       if (c.cells < 2) {
                           throw ContractViolation("checkerboard needs at least 2 cells per side");
                       }
                   },
               },
               variant);
}

int dataset_dim(const DatasetVariant& variant) {
    return std::visit(Overloaded{
                          [](const GaussianIso& g) { return g.dim; },
                          [](const GaussianMixture& g) { return static_cast<int>(g.centers.front().size()); },
                          [](const TwoMoons&) { return 2; },
                          [](const Checkerboard&) { return 2; },
                      },
                      variant);
}

Eigen::MatrixXd sample_dataset(const DatasetVariant& variant, std::size_t n, Rng& rng) {
    const int dim = dataset_dim(variant);
    const auto cols = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd out(dim, cols);
    std::visit(Overloaded{
                   [&](const GaussianIso& g) {
                       for (Eigen::Index j = 0; j < cols; ++j) {
                           for (int i = 0; i < dim; ++i) {
                               out(i, j) = g.sigma_data * standard_normal(rng);
                           }
                       }
                   },
                   [&](const GaussianMixture& g) {
                       std::uniform_int_distribution<std::size_t> pick(0, g.centers.size() - 1);
                       for (Eigen::Index j = 0; j < cols; ++j) {
                           const auto& c = g.centers[pick(rng)];
                           for (int i = 0; i < dim; ++i) {
                               out(i, j) = c[i] + g.component_std * standard_normal(rng);
                           }
                       }
                   },
                   [&](const TwoMoons& m) {
                       std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
                       std::bernoulli_distribution upper(0.5);
                       for (Eigen::Index j = 0; j < cols; ++j) {
                           const double t = angle(rng);
                           double x = 0.0;
                           double y = 0.0;
                           if (upper(rng)) {
                               x = std::cos(t);
                               y = std::sin(t);
                           } else {
                               x = 1.0 - std::cos(t);
                               y = 0.5 - std::sin(t);
                           }
                           x += m.noise_std * standard_normal(rng);
                           y += m.noise_std * standard_normal(rng);
                           out(0, j) = 0.5 * (x - 0.5);
                           out(1, j) = 0.5 * (y - 0.25);
                       }
                   },
                   [&](const Checkerboard& c) {
                       // Dark cells are those with even row + column parity.
                       std::vector<std::pair<int, int>> dark;
                       for (int r = 0; r < c.cells; ++r) {
                           for (int k = 0; k < c.cells; ++k) {
                               if ((r + k) % 2 == 0) {
                                   dark.emplace_back(r, k);
                               }
                           }
                       }
                       std::uniform_int_distribution<std::size_t> pick(0, dark.size() - 1);
                       std::uniform_real_distribution<double> unit(0.0, 1.0);
                       const double width = 2.0 / c.cells;
                       for (Eigen::Index j = 0; j < cols; ++j) {
                           const auto [row, col] = dark[pick(rng)];
                           out(0, j) = -1.0 + (col + unit(rng)) * width;
                           out(1, j) = -1.0 + (row + unit(rng)) * width;
                       }
                   },
               },
               variant);
    return out;
}

Eigen::MatrixXd generate_dataset(const DatasetSpec& spec, Rng& rng) {
    spec.validate();
    return sample_dataset(spec.variant, spec.n_train, rng);
}

}  // namespace alsr
