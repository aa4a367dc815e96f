#ifndef MVRANK_NORM_CHECKS_HPP
#define MVRANK_NORM_CHECKS_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mvrank/random.hpp"
#include "mvrank/vector.hpp"

/**
 * @file norm_checks.hpp
 *
 * Sampled certification of the norm axioms, strict convexity of the unit
 * ball and the parallelogram law. Every check is a pure function of the
 * functional, the sample count and the seed. Structured probes (coordinate
 * axes and their sums) are evaluated before the random stream, so the
 * canonical counterexamples of the Lp families are reported as witnesses.
 */

namespace mvrank {

/// Anything callable on a Vector that reports its dimension: NormSpec,
/// PsiNorm, Pseudonorm and ad-hoc test functionals.
template <class N>
concept NormLike = requires(const N& f, const Vector& v) {
    { f(v) } -> std::convertible_to<double>;
    { f.dim() } -> std::convertible_to<int>;
};

struct SamplingOptions {
    std::size_t sample_count = 10000;
    std::uint64_t seed = default_seed;
    double tol = 1e-9;
};

using VectorPair = std::pair<Vector, Vector>;

struct NormAxiomReport {
    bool positivity_ok = true;
    bool homogeneity_ok = true;
    bool triangle_ok = true;
    bool symmetry_ok = true;
    double worst_violation = 0.0;
    /// First failing sample; for homogeneity the pair is (v, lambda v).
    std::optional<VectorPair> witness;
    std::string failed_check;

    bool all_ok() const noexcept {
        return positivity_ok && homogeneity_ok && triangle_ok && symmetry_ok;
    }
};

struct ConvexityResult {
    bool strictly_convex = true;
    /// min over samples of (1 - ||(u+w)/2||) / angle(u,w)^2 for unit u, w.
    double margin = std::numeric_limits<double>::infinity();
    std::optional<VectorPair> witness;
};

struct ParallelogramResult {
    bool holds = true;
    double worst_violation = 0.0;
    std::optional<VectorPair> witness;
};

namespace detail {

inline Vector random_scaled(Rng& rng, int dim) {
    return gaussian_vector(rng, dim) * log_uniform(rng, 1e-2, 1e2);
}

/// Axis vectors and the sums/differences of pairs of axes.
inline std::vector<VectorPair> axis_probe_pairs(int dim) {
    std::vector<VectorPair> out;
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
            out.emplace_back(unit_vector(dim, i), unit_vector(dim, j));
            out.emplace_back(unit_vector(dim, i) + unit_vector(dim, j),
                             unit_vector(dim, i) - unit_vector(dim, j));
        }
    return out;
}

struct FailureLog {
    bool* flag;
    double* worst;
    std::optional<VectorPair>* witness;
    std::string* failed_check;
};

} // namespace detail

/**
 * Checks ||lambda v|| = |lambda| ||v||, ||u+v|| <= ||u|| + ||v||,
 * ||v|| = ||-v|| and ||v|| > 0 for v != 0 on sampled pairs.
 *
 * Violations are measured relative to the magnitudes involved; a flag fails
 * when its relative violation exceeds opts.tol. Definiteness failures
 * (||v|| <= tol |v|_e for v != 0) and ||0|| != 0 count as violation 1.
 */
template <NormLike N>
NormAxiomReport check_norm_axioms(const N& norm, const SamplingOptions& opts = {}) {
    const int dim = norm.dim();
    NormAxiomReport rep;
    Rng rng = substream(opts.seed, 0);

    auto record = [&](bool& flag, double violation, const Vector& a, const Vector& b,
                      const char* which) {
        rep.worst_violation = std::max(rep.worst_violation, violation);
        if (violation > opts.tol) {
            if (flag && !rep.witness) {
                rep.witness = VectorPair{a, b};
                rep.failed_check = which;
            }
            flag = false;
        }
    };

    const Vector zero = Vector::Zero(dim);
    const double at_zero = norm(zero);
    if (at_zero != 0.0) record(rep.positivity_ok, std::max(1.0, std::abs(at_zero)), zero, zero, "positivity");

    auto check_pair = [&](const Vector& u, const Vector& v, double lambda) {
        const double nu = norm(u);
        const double nv = norm(v);
        // positivity / definiteness
        if (v.norm() > 0.0) {
            const double ratio = nv / v.norm();
            record(rep.positivity_ok, (ratio <= opts.tol) ? 1.0 : 0.0, v, v, "positivity");
        }
        // homogeneity
        const Vector lv = lambda * v;
        const double nlv = norm(lv);
        const double expect = std::abs(lambda) * nv;
        const double hscale = std::max({expect, nlv, std::numeric_limits<double>::min()});
        record(rep.homogeneity_ok, std::abs(nlv - expect) / hscale, v, lv, "homogeneity");
        // symmetry
        const double nmv = norm(Vector(-v));
        const double sscale = std::max({nv, nmv, std::numeric_limits<double>::min()});
        record(rep.symmetry_ok, std::abs(nmv - nv) / sscale, v, Vector(-v), "symmetry");
        // triangle
        const double nsum = norm(Vector(u + v));
        const double tscale = std::max({nu + nv, nsum, std::numeric_limits<double>::min()});
        record(rep.triangle_ok, std::max(0.0, nsum - nu - nv) / tscale, u, v, "triangle");
    };

    for (int i = 0; i < dim; ++i) check_pair(unit_vector(dim, i), unit_vector(dim, i), 2.0);
    for (const auto& [a, b] : detail::axis_probe_pairs(dim)) check_pair(a, b, -3.0);
    for (std::size_t s = 0; s < opts.sample_count; ++s) {
        const Vector u = detail::random_scaled(rng, dim);
        const Vector v = detail::random_scaled(rng, dim);
        const double lambda = uniform(rng, -4.0, 4.0);
        check_pair(u, v, lambda);
    }
    return rep;
}

/**
 * Midpoint test for strict convexity of the unit ball.
 *
 * Pairs of distinct, non-antipodal unit vectors u, w are sampled at
 * separations from 1e-3 to pi - 1e-3 (log-uniform below 1 rad). The
 * midpoint defect 1 - ||(u+w)/2|| is divided by the squared Euclidean angle
 * between u and w, which keeps nearly parallel pairs from reading as flat.
 * The ball is reported strictly convex iff the minimum normalized defect
 * exceeds opts.tol. In dimension 1 there are no admissible pairs and the
 * result is trivially true.
 */
template <NormLike N>
ConvexityResult check_strict_convexity(const N& norm, const SamplingOptions& opts = {}) {
    const int dim = norm.dim();
    ConvexityResult res;
    if (dim < 2) return res;
    Rng rng = substream(opts.seed, 1);

    auto test = [&](const Vector& a, const Vector& b) {
        const double theta = angle_between(a, b);
        if (!(theta > 0.0) || theta >= std::numbers::pi) return;
        const Vector u = a / norm(a);
        const Vector w = b / norm(b);
        const double defect = 1.0 - norm(Vector(0.5 * (u + w)));
        const double m = defect / (theta * theta);
        if (m < res.margin) {
            res.margin = m;
            if (!(m > opts.tol) && !res.witness) res.witness = VectorPair{u, w};
        }
    };

    for (const auto& [a, b] : detail::axis_probe_pairs(dim)) {
        test(a, b);
        test(Vector(a + b), Vector(a - b));
    }
    for (std::size_t s = 0; s < opts.sample_count; ++s) {
        const Vector a = random_unit(rng, dim);
        const Vector t = random_tangent(rng, a);
        const double theta = (s % 2 == 0) ? log_uniform(rng, 1e-3, 1.0)
                                          : uniform(rng, 1.0, std::numbers::pi - 1e-3);
        const Vector b = std::cos(theta) * a + std::sin(theta) * t;
        test(a, b);
    }
    res.strictly_convex = res.margin > opts.tol;
    if (res.strictly_convex) res.witness.reset();
    return res;
}

/// Checks ||x+y||^2 + ||x-y||^2 = 2(||x||^2 + ||y||^2), relative to the
/// right-hand side.
template <NormLike N>
ParallelogramResult check_parallelogram(const N& norm, const SamplingOptions& opts = {}) {
    const int dim = norm.dim();
    ParallelogramResult res;
    Rng rng = substream(opts.seed, 2);

    auto test = [&](const Vector& x, const Vector& y) {
        const double nx = norm(x), ny = norm(y);
        const double a = norm(Vector(x + y)), b = norm(Vector(x - y));
        const double rhs = 2.0 * (nx * nx + ny * ny);
        if (rhs == 0.0) return;
        const double v = std::abs(a * a + b * b - rhs) / rhs;
        res.worst_violation = std::max(res.worst_violation, v);
        if (v > opts.tol) {
            if (res.holds) res.witness = VectorPair{x, y};
            res.holds = false;
        }
    };

    for (const auto& [a, b] : detail::axis_probe_pairs(dim)) test(a, b);
    for (std::size_t s = 0; s < opts.sample_count; ++s)
        test(detail::random_scaled(rng, dim), detail::random_scaled(rng, dim));
    return res;
}

} // namespace mvrank

#endif
