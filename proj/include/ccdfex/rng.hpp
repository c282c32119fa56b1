#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ccdfex {

/// splitmix64 round; used to derive independent stream seeds from a
/// base seed and counters so results do not depend on scheduling.
inline std::uint64_t mix_seed(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    return mix_seed(mix_seed(mix_seed(seed) ^ a) ^ b);
}

/// Seeded generator with explicit transforms; avoids the
/// implementation-defined std::*_distribution mappings so a fixed
/// seed yields the same stream everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Standard exponential via inversion.
    double exponential() { return -std::log1p(-uniform01()); }

    /// Geometric on {1, 2, ...} with success probability p.
    std::uint64_t geometric(double p) {
        if (p >= 1.0) return 1;
        const double q = 1.0 - p;
        const double u = uniform01();
        return 1 + static_cast<std::uint64_t>(std::floor(std::log1p(-u) / std::log(q)));
    }

private:
    std::mt19937_64 gen_;
};

} // namespace ccdfex
