#ifndef MVRANK_RANDOM_HPP
#define MVRANK_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "mvrank/vector.hpp"

namespace mvrank {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t default_seed = 42;

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Independent generator for task `index` of a run seeded with `seed`.
/// Work split across tasks stays replay-identical however the tasks are
/// scheduled.
inline Rng substream(std::uint64_t seed, std::uint64_t index) {
    return Rng(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL)));
}

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double log_uniform(Rng& rng, double lo, double hi) {
    return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

inline int uniform_index(Rng& rng, int n) {
    return std::uniform_int_distribution<int>(0, n - 1)(rng);
}

inline Vector gaussian_vector(Rng& rng, int dim) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = normal(rng);
    return v;
}

/// Uniformly distributed point of the Euclidean unit sphere S^{dim-1}.
inline Vector random_unit(Rng& rng, int dim) {
    for (;;) {
        Vector v = gaussian_vector(rng, dim);
        const double n = v.norm();
        if (n > 1e-12) return v / n;
    }
}

/// Unit vector orthogonal to the unit vector `u`, uniformly distributed on
/// the great sphere of directions perpendicular to `u`.
inline Vector random_tangent(Rng& rng, const Vector& u) {
    for (;;) {
        Vector t = gaussian_vector(rng, static_cast<int>(u.size()));
        t -= t.dot(u) * u;
        const double n = t.norm();
        if (n > 1e-12) return t / n;
    }
}

} // namespace mvrank

#endif
