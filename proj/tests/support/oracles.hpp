#pragma once

// Reference computations used by the tests. Everything here is derived from
// first principles and deliberately avoids the library's own formulas.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include <alsr/variance_lab.hpp>

namespace oracle {

struct Moments {
    double mean = 0.0;
    double variance = 0.0;  // n - 1 denominator
};

// Classic two-pass mean/variance in extended precision.
inline Moments two_pass(std::span<const double> xs) {
    if (xs.size() < 2) {
        throw std::invalid_argument("two_pass needs two values");
    }
    long double sum = 0.0L;
    for (double x : xs) {
        sum += x;
    }
    const long double mean = sum / static_cast<long double>(xs.size());
    long double ss = 0.0L;
    for (double x : xs) {
        const long double d = x - mean;
        ss += d * d;
    }
    return {static_cast<double>(mean), static_cast<double>(ss / static_cast<long double>(xs.size() - 1))};
}

inline double relative_error(double got, double want) {
    const double scale = std::max(std::abs(want), std::numeric_limits<double>::min());
    return std::abs(got - want) / scale;
}

// The conditional law of g at each grid point is replaced by two equally likely
// atoms m +- sqrt(v). They carry the same first two moments, which is all the
// variance identities depend on, and make every expectation a finite sum.
struct Atom {
    std::size_t point;
    long double prob;  // joint probability under the sampling law
    long double g;
};

inline std::vector<Atom> joint_atoms(const alsr::DiscretePopulation& pop, const std::vector<double>& sampling) {
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < pop.size(); ++i) {
        const long double s = std::sqrt(static_cast<long double>(pop.cond_var[i]));
        atoms.push_back({i, 0.5L * sampling[i], pop.cond_mean[i] - s});
        atoms.push_back({i, 0.5L * sampling[i], pop.cond_mean[i] + s});
    }
    return atoms;
}

// Var(g) of the joint (lambda, g) law under the base distribution, by enumeration.
inline double joint_variance(const alsr::DiscretePopulation& pop) {
    const auto atoms = joint_atoms(pop, pop.base_prob);
    long double m1 = 0.0L;
    for (const auto& a : atoms) {
        m1 += a.prob * a.g;
    }
    long double var = 0.0L;
    for (const auto& a : atoms) {
        var += a.prob * (a.g - m1) * (a.g - m1);
    }
    return static_cast<double>(var);
}

// Mean and variance of one importance-weighted draw (q/p)(lambda) * g with
// lambda ~ prop, by enumeration over atoms. Points with prop == 0 are never drawn.
inline Moments importance_draw_moments(const alsr::DiscretePopulation& pop, const std::vector<double>& prop) {
    const auto atoms = joint_atoms(pop, prop);
    auto value = [&](const Atom& a) {
        return static_cast<long double>(pop.base_prob[a.point]) / prop[a.point] * a.g;
    };
    long double m1 = 0.0L;
    for (const auto& a : atoms) {
        if (a.prob > 0.0L) {
            m1 += a.prob * value(a);
        }
    }
    long double var = 0.0L;
    for (const auto& a : atoms) {
        if (a.prob > 0.0L) {
            var += a.prob * (value(a) - m1) * (value(a) - m1);
        }
    }
    return {static_cast<double>(m1), static_cast<double>(var)};
}

inline double target_mean(const alsr::DiscretePopulation& pop) {
    long double t = 0.0L;
    for (std::size_t i = 0; i < pop.size(); ++i) {
        t += static_cast<long double>(pop.base_prob[i]) * pop.cond_mean[i];
    }
    return static_cast<double>(t);
}

inline bool absolutely_continuous(const alsr::DiscretePopulation& pop, const std::vector<double>& prop) {
    for (std::size_t i = 0; i < pop.size(); ++i) {
        if (pop.base_prob[i] > 0.0 && prop[i] <= 0.0) {
            return false;
        }
    }
    return true;
}

// Calls fn on every composition of `resolution` into `parts` nonnegative integers,
// scaled to a probability vector.
inline void for_each_lattice_point(std::size_t parts, int resolution,
                                   const std::function<void(const std::vector<double>&)>& fn) {
    std::vector<int> counts(parts, 0);
    std::vector<double> probs(parts, 0.0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t idx, int remaining) {
        if (idx + 1 == parts) {
            counts[idx] = remaining;
            for (std::size_t k = 0; k < parts; ++k) {
                probs[k] = static_cast<double>(counts[k]) / resolution;
            }
            fn(probs);
            return;
        }
        for (int c = 0; c <= remaining; ++c) {
            counts[idx] = c;
            rec(idx + 1, remaining - c);
        }
    };
    rec(0, resolution);
}

struct LatticeMin {
    std::vector<double> argmin;
    double variance = std::numeric_limits<double>::infinity();
};

// Brute-force minimum of the one-draw importance estimator variance over the lattice.
inline LatticeMin lattice_minimum(const alsr::DiscretePopulation& pop, int resolution) {
    LatticeMin best;
    for_each_lattice_point(pop.size(), resolution, [&](const std::vector<double>& p) {
        if (!absolutely_continuous(pop, p)) {
            return;
        }
        const double v = importance_draw_moments(pop, p).variance;
        if (v < best.variance) {
            best.variance = v;
            best.argmin = p;
        }
    });
    return best;
}

}  // namespace oracle
