#ifndef MVRANK_COUNTEREXAMPLE_HPP
#define MVRANK_COUNTEREXAMPLE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "mvrank/errors.hpp"
#include "mvrank/norm_checks.hpp"
#include "mvrank/norms.hpp"
#include "mvrank/product_space.hpp"
#include "mvrank/random.hpp"
#include "mvrank/sections.hpp"
#include "mvrank/spherical_perturbation.hpp"
#include "mvrank/vector.hpp"

namespace mvrank::counterexample {

/// (R^3, ||.||_1) x (R^3, ||.||_2) with the Euclidean combination.
inline SpaceHandle counterexample_product(long long n) {
    return standard_product({SpaceHandle::leaf(NormSpec::perturbed_spherical(1, n)),
                             SpaceHandle::leaf(NormSpec::perturbed_spherical(2, n))});
}

struct ConvexityTrial {
    long long n = 0;
    ConvexityResult norm1;
    ConvexityResult norm2;
    bool passes() const noexcept { return norm1.strictly_convex && norm2.strictly_convex; }
};

inline ConvexityTrial convexity_at(long long n, const SamplingOptions& sampler = {}) {
    return ConvexityTrial{n, check_strict_convexity(NormSpec::perturbed_spherical(1, n), sampler),
                          check_strict_convexity(NormSpec::perturbed_spherical(2, n), sampler)};
}

struct ChooseNOptions {
    /// Grid is n = 2^0, 2^1, ..., 2^max_exponent.
    int max_exponent = 20;
    SamplingOptions sampler{};
};

struct ChooseNResult {
    long long n = 0;
    double margin1 = 0.0;
    double margin2 = 0.0;
    std::vector<ConvexityTrial> trials;
};

/**
 * Smallest grid value n for which both perturbed unit balls pass the sampled
 * strict-convexity test.
 *
 * @throws SearchExhausted carrying the largest n tried
 */
inline ChooseNResult choose_n(const ChooseNOptions& opts = {}) {
    if (opts.max_exponent < 0 || opts.max_exponent > 62) throw InvalidSpec("choose_n: max_exponent outside 0..62");
    ChooseNResult res;
    long long n = 1;
    for (int e = 0; e <= opts.max_exponent; ++e, n *= 2) {
        res.trials.push_back(convexity_at(n, opts.sampler));
        const ConvexityTrial& t = res.trials.back();
        if (t.passes()) {
            res.n = n;
            res.margin1 = t.norm1.margin;
            res.margin2 = t.norm2.margin;
            return res;
        }
    }
    throw SearchExhausted("choose_n: no grid value yields strictly convex balls", n / 2);
}

struct DiagonalCheck {
    double worst_relative_error = 0.0;
    std::size_t samples = 0;
    Vector worst_v;
};

/// max over samples of | d((0,0),(v,v))^2 - 2|v|^2 | / |v|^2 in the product.
inline DiagonalCheck verify_diagonal_euclidean(long long n, std::size_t sample_count,
                                               std::uint64_t seed = default_seed) {
    const SpaceHandle prod = counterexample_product(n);
    Rng rng = substream(seed, 30);
    DiagonalCheck res;
    res.worst_v = Vector::Zero(3);
    const Vector origin = Vector::Zero(6);
    auto test = [&](const Vector& v) {
        ++res.samples;
        const double e2 = v.squaredNorm();
        const double d = distance(prod, origin, join_point({v, v}));
        if (e2 == 0.0) {
            if (d != 0.0) res.worst_relative_error = std::numeric_limits<double>::infinity();
            return;
        }
        const double err = std::abs(d * d - 2.0 * e2) / e2;
        if (err > res.worst_relative_error) {
            res.worst_relative_error = err;
            res.worst_v = v;
        }
    };
    for (int i = 0; i < 3; ++i) test(unit_vector(3, i));
    for (std::size_t s = 0; s < sample_count; ++s) test(gaussian_vector(rng, 3) * log_uniform(rng, 1e-3, 1e3));
    return res;
}

struct NullSetReport {
    double max_deviation_phi1 = 0.0;
    double max_deviation_phi2 = 0.0;
    std::size_t points = 0;
};

/// Largest |phi_i - 1| over points_per_circle evenly spaced points on each
/// of the eight null circles.
inline NullSetReport null_set_exactness(long long n, int points_per_circle) {
    if (points_per_circle < 1) throw InvalidSpec("null_set_exactness: points_per_circle must be >= 1");
    NullSetReport rep;
    for (int c = 0; c < 8; ++c)
        for (int j = 0; j < points_per_circle; ++j) {
            const Vector u = null_circle_point(c, 2.0 * std::numbers::pi * j / points_per_circle);
            rep.max_deviation_phi1 = std::max(rep.max_deviation_phi1, std::abs(phi1(u, n) - 1.0));
            rep.max_deviation_phi2 = std::max(rep.max_deviation_phi2, std::abs(phi2(u, n) - 1.0));
            ++rep.points;
        }
    return rep;
}

/// epsilon_tilde * epsilon_hat at a unit vector.
inline double perturbation_product(const Vector& u, long long n) {
    return epsilon_tilde_at(u, n) * epsilon_hat(u, n);
}

struct GreatCircleCount {
    int zeros = 0;
    /// Set when a local refinement found two zeros inside one coarse bracket.
    bool resolution_warning = false;
    double max_abs = 0.0;
    /// Zero locations as angles along the circle, ascending.
    std::vector<double> zero_angles;
};

/**
 * Zeros of epsilon_tilde * epsilon_hat along the great circle
 * t -> cos t u + sin t w, t in [0, 2 pi), from m cyclic samples.
 *
 * Exact hits and strict sign changes are counted, each bracket located by one
 * bisection step. At every local minimum of |f| without a neighbouring sign
 * change the two adjacent intervals are resampled 64-fold; two sign changes
 * found there are counted and raise resolution_warning.
 */
inline GreatCircleCount great_circle_null_intersections(const Vector& u, const Vector& w, int m,
                                                        long long n = 1) {
    if (m < 1000) throw InvalidSpec("great_circle_null_intersections: m must be >= 1000");
    const Plane p = Plane::spanned_by(u, w);
    require_dim(p.b1, 3, "great_circle_null_intersections");
    const double two_pi = 2.0 * std::numbers::pi;
    auto f = [&](double t) { return perturbation_product(p.direction(t), n); };
    std::vector<double> ts(static_cast<std::size_t>(m)), fs(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        ts[static_cast<std::size_t>(i)] = two_pi * i / m;
        fs[static_cast<std::size_t>(i)] = f(ts[static_cast<std::size_t>(i)]);
    }
    GreatCircleCount res;
    auto at = [&](int i) { return fs[static_cast<std::size_t>((i % m + m) % m)]; };
    auto t_at = [&](int i) { return two_pi * i / m; };
    auto opposite = [](double a, double b) { return (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0); };

    for (int i = 0; i < m; ++i) {
        const double a = at(i), b = at(i + 1);
        res.max_abs = std::max(res.max_abs, std::abs(a));
        if (a == 0.0) {
            ++res.zeros;
            res.zero_angles.push_back(t_at(i));
        } else if (opposite(a, b)) {
            ++res.zeros;
            const double mid = 0.5 * (t_at(i) + t_at(i + 1));
            const double fm = f(mid);
            res.zero_angles.push_back(opposite(a, fm) ? 0.5 * (t_at(i) + mid) : 0.5 * (mid + t_at(i + 1)));
        }
    }
    for (int i = 0; i < m; ++i) {
        const double prev = at(i - 1), cur = at(i), next = at(i + 1);
        if (cur == 0.0 || prev == 0.0 || next == 0.0) continue;
        if (opposite(prev, cur) || opposite(cur, next)) continue;
        if (!(std::abs(cur) < std::abs(prev) && std::abs(cur) <= std::abs(next))) continue;
        constexpr int sub = 64;
        const double t0 = t_at(i - 1), t1 = t_at(i + 1);
        int found = 0;
        std::vector<double> where;
        double last = prev;
        for (int s = 1; s <= sub; ++s) {
            const double t = t0 + (t1 - t0) * s / sub;
            const double v = (s == sub) ? next : f(t);
            if (v == 0.0 || opposite(last, v)) {
                ++found;
                where.push_back(t);
            }
            if (v != 0.0) last = v;
        }
        if (found >= 2) {
            res.zeros += found;
            res.resolution_warning = true;
            for (double t : where) res.zero_angles.push_back(std::fmod(t + two_pi, two_pi));
        }
    }
    std::sort(res.zero_angles.begin(), res.zero_angles.end());
    return res;
}

struct SweepReport {
    int circles = 0;
    int min_zeros = std::numeric_limits<int>::max();
    int below_eight = 0;
    int resolution_warnings = 0;
    /// Smallest max |epsilon_tilde * epsilon_hat| along any circle; > 0 means
    /// no sampled great circle lies in the null set.
    double min_max_abs = std::numeric_limits<double>::infinity();
};

inline SweepReport great_circle_sweep(int circle_count, int m, std::uint64_t seed = default_seed,
                                      long long n = 1) {
    if (circle_count < 1) throw InvalidSpec("great_circle_sweep: circle_count must be >= 1");
    SweepReport rep;
    for (int i = 0; i < circle_count; ++i) {
        Rng rng = substream(seed, 5000 + static_cast<std::uint64_t>(i));
        const Plane p = Plane::random(rng, 3);
        const GreatCircleCount c = great_circle_null_intersections(p.b1, p.b2, m, n);
        ++rep.circles;
        rep.min_zeros = std::min(rep.min_zeros, c.zeros);
        if (c.zeros < 8) ++rep.below_eight;
        if (c.resolution_warning) ++rep.resolution_warnings;
        rep.min_max_abs = std::min(rep.min_max_abs, c.max_abs);
    }
    return rep;
}

struct NamedPlane {
    std::string id;
    Plane plane;
};

/// Coordinate planes xy, xz, yz and the plane normal to (1,1,1).
inline std::vector<NamedPlane> figure_planes() {
    const Vector normal = make_vector({1.0, 1.0, 1.0}).normalized();
    const Matrix q = orthogonal_complement({normal}, 3);
    return {
        {"xy", Plane{unit_vector(3, 0), unit_vector(3, 1)}},
        {"xz", Plane{unit_vector(3, 0), unit_vector(3, 2)}},
        {"yz", Plane{unit_vector(3, 1), unit_vector(3, 2)}},
        {"n111", Plane::spanned_by(q.col(0), q.col(1))},
    };
}

struct SectionRow {
    std::string plane_id;
    double angle = 0.0;
    double radius_norm1 = 0.0;
    double radius_norm2 = 0.0;
    double radius_euclidean = 0.0;
};

/// Polar radii of the three unit balls in each figure plane.
inline std::vector<SectionRow> section_table(long long n, int m) {
    const NormSpec n1 = NormSpec::perturbed_spherical(1, n);
    const NormSpec n2 = NormSpec::perturbed_spherical(2, n);
    const NormSpec e = NormSpec::euclidean(3);
    std::vector<SectionRow> rows;
    for (const auto& np : figure_planes()) {
        const PlaneSection s1 = unit_ball_section(n1, np.plane, m);
        const PlaneSection s2 = unit_ball_section(n2, np.plane, m);
        const PlaneSection se = unit_ball_section(e, np.plane, m);
        for (std::size_t j = 0; j < s1.angles.size(); ++j)
            rows.push_back({np.id, s1.angles[j], s1.radii[j], s2.radii[j], se.radii[j]});
    }
    return rows;
}

} // namespace mvrank::counterexample

#endif
