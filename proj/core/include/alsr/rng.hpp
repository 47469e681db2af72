#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace alsr {

using Rng = std::mt19937_64;

/// Derives an independent 64-bit seed for the named substream of a root seed.
/// Streams used by the trainer: "data", "reference", "batch", "noise", "init", "eval".
std::uint64_t derive_seed(std::uint64_t root, std::string_view name, std::uint64_t index = 0);

inline Rng substream(std::uint64_t root, std::string_view name, std::uint64_t index = 0) {
    return Rng(derive_seed(root, name, index));
}

/// One standard normal draw. A fresh distribution object is used per call so
/// no cached spare value leaks between callers sharing a stream.
inline double standard_normal(Rng& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    return dist(rng);
}

}  // namespace alsr
