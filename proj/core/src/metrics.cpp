#include "alsr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "alsr/errors.hpp"

namespace alsr {
namespace {

void check_pair(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.cols() == 0 || b.cols() == 0) {
        throw ContractViolation("distribution metric: empty sample");
    }
    if (a.rows() != b.rows()) {
        throw ContractViolation("distribution metric: dimension mismatch");
    }
}

Eigen::MatrixXd subsample(const Eigen::MatrixXd& m, std::size_t max_points, Rng& rng) {
    if (static_cast<std::size_t>(m.cols()) <= max_points) {
        return m;
    }
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(m.cols()));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    // Partial Fisher-Yates: the first max_points entries become a uniform subset.
    for (std::size_t i = 0; i < max_points; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }
    Eigen::MatrixXd out(m.rows(), static_cast<Eigen::Index>(max_points));
    for (std::size_t i = 0; i < max_points; ++i) {
        out.col(static_cast<Eigen::Index>(i)) = m.col(idx[i]);
    }
    return out;
}

// Coordinates of b laid out per dimension so the inner loop runs over points.
using PointsByDim = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>;

double row_distance_sum(const PointsByDim& bt, Eigen::Index begin, const Eigen::MatrixXd& a, Eigen::Index i,
                        Eigen::ArrayXd& scratch) {
    const Eigen::Index n = bt.rows() - begin;
    if (n <= 0) {
        return 0.0;
    }
    auto sq = scratch.head(n);
    sq.setZero();
    for (Eigen::Index k = 0; k < bt.cols(); ++k) {
        sq += (bt.col(k).segment(begin, n).array() - a(k, i)).square();
    }
    return sq.sqrt().sum();
}

double cross_sum(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    const PointsByDim bt = b.transpose();
    Eigen::ArrayXd scratch(bt.rows());
    double total = 0.0;
    for (Eigen::Index i = 0; i < a.cols(); ++i) {
        total += row_distance_sum(bt, 0, a, i, scratch);
    }
    return total;
}

/// Sum over unordered pairs i < j.
double within_pair_sum(const Eigen::MatrixXd& a) {
    const PointsByDim at = a.transpose();
    Eigen::ArrayXd scratch(at.rows());
    double total = 0.0;
    for (Eigen::Index i = 0; i < a.cols(); ++i) {
        total += row_distance_sum(at, i + 1, a, i, scratch);
    }
    return total;
}

double within_mean_u(const Eigen::MatrixXd& a) {
    const double n = static_cast<double>(a.cols());
    if (a.cols() < 2) {
        return 0.0;
    }
    return 2.0 * within_pair_sum(a) / (n * (n - 1.0));
}

/// Deterministic total order on samples; used to make the metrics exactly symmetric.
bool canonical_less(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.cols() != b.cols()) {
        return a.cols() < b.cols();
    }
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

}  // namespace

double energy_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, std::uint64_t seed,
                       std::size_t max_points) {
    check_pair(a, b);
    if (canonical_less(b, a)) {
        return energy_distance(b, a, seed, max_points);
    }
    Rng rng_a = substream(seed, "energy-a");
    Rng rng_b = substream(seed, "energy-b");
    const Eigen::MatrixXd sa = subsample(a, max_points, rng_a);
    const Eigen::MatrixXd sb = subsample(b, max_points, rng_b);
    const double cross = cross_sum(sa, sb) / (static_cast<double>(sa.cols()) * static_cast<double>(sb.cols()));
    const double value = 2.0 * cross - within_mean_u(sa) - within_mean_u(sb);
    return std::max(0.0, value);
}

double energy_distance_vstat(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    check_pair(a, b);
    if (canonical_less(b, a)) {
        return energy_distance_vstat(b, a);
    }
    const double na = static_cast<double>(a.cols());
    const double nb = static_cast<double>(b.cols());
    const double cross = cross_sum(a, b) / (na * nb);
    const double wa = 2.0 * within_pair_sum(a) / (na * na);
    const double wb = 2.0 * within_pair_sum(b) / (nb * nb);
    return std::max(0.0, 2.0 * cross - wa - wb);
}

double wasserstein1_1d(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) {
        throw ContractViolation("wasserstein1_1d: empty sample");
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a.size() == b.size()) {
        double total = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            total += std::abs(a[i] - b[i]);
        }
        return total / static_cast<double>(a.size());
    }
    // Integrate |F_a^{-1}(t) - F_b^{-1}(t)| over the merged quantile breakpoints.
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double t = 0.0;
    double total = 0.0;
    while (i < a.size() && j < b.size()) {
        const double next_a = static_cast<double>(i + 1) / na;
        const double next_b = static_cast<double>(j + 1) / nb;
        const double next = std::min(next_a, next_b);
        total += (next - t) * std::abs(a[i] - b[j]);
        t = next;
        if (next_a <= next) {
            ++i;
        }
        if (next_b <= next) {
            ++j;
        }
    }
    return total;
}

double sliced_wasserstein(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, int n_projections, Rng& rng) {
    check_pair(a, b);
    if (n_projections < 1) {
        throw ContractViolation("sliced_wasserstein: n_projections must be positive");
    }
    const Eigen::Index dim = a.rows();
    double total = 0.0;
    std::vector<double> pa(static_cast<std::size_t>(a.cols()));
    std::vector<double> pb(static_cast<std::size_t>(b.cols()));
    for (int p = 0; p < n_projections; ++p) {
        Eigen::VectorXd u(dim);
        do {
            for (Eigen::Index k = 0; k < dim; ++k) {
                u[k] = standard_normal(rng);
            }
        } while (u.norm() == 0.0);
        u.normalize();
        Eigen::Map<Eigen::RowVectorXd>(pa.data(), a.cols()) = u.transpose() * a;
        Eigen::Map<Eigen::RowVectorXd>(pb.data(), b.cols()) = u.transpose() * b;
        total += wasserstein1_1d(pa, pb);
    }
    return total / n_projections;
}

MetricReport evaluate_samples(const Eigen::MatrixXd& generated, const Eigen::MatrixXd& reference,
                              int n_projections, std::uint64_t seed) {
    MetricReport report;
    report.energy_distance = energy_distance(generated, reference, derive_seed(seed, "energy"));
    Rng rng = substream(seed, "sliced");
    report.sliced_wasserstein = sliced_wasserstein(generated, reference, n_projections, rng);
    report.n_generated = static_cast<std::size_t>(generated.cols());
    report.n_reference = static_cast<std::size_t>(reference.cols());
    report.seed = seed;
    return report;
}

}  // namespace alsr
