#ifndef MVRANK_DECOMPOSITION_HPP
#define MVRANK_DECOMPOSITION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "mvrank/errors.hpp"
#include "mvrank/norm_checks.hpp"
#include "mvrank/norms.hpp"
#include "mvrank/phi.hpp"
#include "mvrank/phi_validation.hpp"
#include "mvrank/product_space.hpp"
#include "mvrank/pseudonorm.hpp"
#include "mvrank/random.hpp"
#include "mvrank/vector.hpp"

namespace mvrank {

/**
 * @brief A map from the normed space (R^d, source_norm) into a product.
 *
 * `analytic` optionally holds the expected factor pseudonorms, one per
 * child of `target`, for comparison with the recovered tables.
 */
struct Embedding {
    std::string name;
    NormSpec source_norm;
    SpaceHandle target;
    std::function<Vector(const Vector&)> map;
    std::vector<std::function<double(const Vector&)>> analytic;

    int source_dim() const noexcept { return source_norm.dim(); }
};

struct DecompositionGrid {
    /// Base points are the lattice {lattice_values}^d.
    std::vector<double> lattice_values{-1.0, -0.5, 0.0, 0.5, 1.0};
    std::vector<double> dyadic{0.25, 0.5, 1.0, 2.0};
    /// d = 2: number of polar angles; d = 3: Fibonacci points per hemisphere.
    int direction_count = 32;
};

/// Unit displacement directions, closed under v -> -v.
inline std::vector<Vector> decomposition_directions(int dim, int count) {
    std::vector<Vector> out;
    if (dim == 1) return {make_vector({1.0}), make_vector({-1.0})};
    if (dim == 2) {
        for (int j = 0; j < count; ++j) {
            const double a = 2.0 * std::numbers::pi * j / count;
            out.push_back(make_vector({std::cos(a), std::sin(a)}));
        }
        return out;
    }
    if (dim == 3) {
        const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (int j = 0; j < count; ++j) {
            const double z = (j + 0.5) / count;
            const double r = std::sqrt(1.0 - z * z);
            const Vector v = make_vector({r * std::cos(golden * j), r * std::sin(golden * j), z});
            out.push_back(v);
            out.push_back(-v);
        }
        return out;
    }
    for (int i = 0; i < dim; ++i) {
        out.push_back(unit_vector(dim, i));
        out.push_back(-unit_vector(dim, i));
        for (int j = i + 1; j < dim; ++j)
            for (double s : {1.0, -1.0}) {
                const Vector v = (unit_vector(dim, i) + s * unit_vector(dim, j)).normalized();
                out.push_back(v);
                out.push_back(-v);
            }
    }
    return out;
}

inline std::vector<Vector> lattice_points(int dim, const std::vector<double>& values) {
    std::vector<Vector> out;
    const std::size_t k = values.size();
    std::size_t total = 1;
    for (int i = 0; i < dim; ++i) total *= k;
    for (std::size_t idx = 0; idx < total; ++idx) {
        Vector p(dim);
        std::size_t r = idx;
        for (int i = 0; i < dim; ++i) {
            p[i] = values[r % k];
            r /= k;
        }
        out.push_back(p);
    }
    return out;
}

struct LemmaViolation {
    std::string lemma;
    int factor = 0;
    Vector base;
    Vector direction;
    double residual = 0.0;
};

/// All residuals are max absolute deviations over the grid.
struct DecompositionResult {
    std::vector<Pseudonorm> factors;
    std::vector<Vector> base_points;
    std::vector<Vector> directions;
    double isometry = 0.0;
    double lemma1 = 0.0;      ///< alpha_i(a, v) vs alpha_i(a + v, v)
    double lemma2 = 0.0;      ///< alpha_i(a, t v) vs |t| alpha_i(a, v)
    double lemma3 = 0.0;      ///< alpha_i(a, v) vs alpha_i(0, v)
    double lemma4 = 0.0;      ///< positive part of alpha_i(v + w) - alpha_i(v) - alpha_i(w)
    double identity = 0.0;    ///< |sum alpha_i^2 - |v|^2| or |Phi(alpha) - |v||
    double lemma1_prime = 0.0; ///< max-norm gap of the alpha vectors at a and a + v
    std::optional<double> analytic;
    std::vector<LemmaViolation> violations;

    bool ok() const noexcept { return violations.empty(); }
};

namespace detail {

inline Vector factor_part(const SpaceHandle& prod, const Vector& x, std::size_t i) {
    return x.segment(prod.child_offset(i), prod.children()[i].point_dim());
}

inline DecompositionResult decompose(const Embedding& e, const DecompositionGrid& grid, double tol,
                                     bool generalized) {
    const SpaceHandle& prod = e.target;
    if (prod.is_leaf()) throw InvalidSpec("factor_decomposition: target must be a product");
    const int d = e.source_dim();
    const std::size_t k = prod.children().size();
    const PhiSpec& phi = prod.phi();
    DecompositionResult res;
    res.base_points = lattice_points(d, grid.lattice_values);
    res.directions = decomposition_directions(d, grid.direction_count);

    auto image = [&](const Vector& a) {
        Vector y = e.map(a);
        require_dim(y, prod.point_dim(), "factor_decomposition");
        return y;
    };
    auto alpha = [&](const Vector& a, const Vector& v) {
        const Vector ya = image(a), yb = image(Vector(a + v));
        Vector out(static_cast<Eigen::Index>(k));
        for (std::size_t i = 0; i < k; ++i)
            out[static_cast<Eigen::Index>(i)] =
                distance(prod.children()[i], factor_part(prod, ya, i), factor_part(prod, yb, i));
        return out;
    };

    // Isometry is a precondition and is checked on every grid displacement.
    for (const Vector& a : res.base_points)
        for (const Vector& v : res.directions)
            for (double t : grid.dyadic) {
                const Vector tv = t * v;
                const double src = norm_eval(e.source_norm, tv);
                const double dst = distance(prod, image(a), image(Vector(a + tv)));
                res.isometry = std::max(res.isometry, std::abs(dst - src));
            }
    if (res.isometry > tol)
        throw NotIsometric("factor_decomposition: embedding '" + e.name + "' distorts distances by " +
                           std::to_string(res.isometry));

    auto note = [&](double& slot, double r, const char* lemma, int factor, const Vector& a, const Vector& v) {
        slot = std::max(slot, r);
        if (r > tol) {
            for (const auto& w : res.violations)
                if (w.lemma == lemma) return;
            res.violations.push_back({lemma, factor, a, v, r});
        }
    };

    const Vector origin = Vector::Zero(d);
    std::vector<Vector> alpha0;
    for (const Vector& v : res.directions) alpha0.push_back(alpha(origin, v));

    for (const Vector& a : res.base_points)
        for (std::size_t j = 0; j < res.directions.size(); ++j) {
            const Vector& v = res.directions[j];
            const Vector here = alpha(a, v);
            const Vector next = alpha(Vector(a + v), v);
            for (std::size_t i = 0; i < k; ++i) {
                const auto ii = static_cast<Eigen::Index>(i);
                const int fi = static_cast<int>(i);
                note(res.lemma1, std::abs(here[ii] - next[ii]), "lemma1", fi, a, v);
                note(res.lemma3, std::abs(here[ii] - alpha0[j][ii]), "lemma3", fi, a, v);
            }
            for (double t : grid.dyadic)
                for (double s : {1.0, -1.0}) {
                    const Vector tv = (s * t) * v;
                    const Vector scaled = alpha(a, tv);
                    for (std::size_t i = 0; i < k; ++i) {
                        const auto ii = static_cast<Eigen::Index>(i);
                        note(res.lemma2, std::abs(scaled[ii] - t * here[ii]), "lemma2", static_cast<int>(i), a, tv);
                    }
                }
            if (generalized)
                note(res.lemma1_prime, (here - next).cwiseAbs().maxCoeff(), "lemma1_prime", -1, a, v);
            const double len = norm_eval(e.source_norm, v);
            const double id = generalized ? std::abs(phi_eval(phi, here) - len)
                                          : std::abs(here.squaredNorm() - len * len);
            note(res.identity, id, generalized ? "phi_identity" : "pythagorean", -1, a, v);
        }

    for (std::size_t j = 0; j < res.directions.size(); ++j)
        for (std::size_t l = 0; l < res.directions.size(); ++l) {
            const Vector& v = res.directions[j];
            const Vector& w = res.directions[l];
            const Vector sum = alpha(origin, Vector(v + w));
            for (std::size_t i = 0; i < k; ++i) {
                const auto ii = static_cast<Eigen::Index>(i);
                note(res.lemma4, std::max(0.0, sum[ii] - alpha0[j][ii] - alpha0[l][ii]), "lemma4",
                     static_cast<int>(i), v, w);
            }
        }

    for (std::size_t i = 0; i < k; ++i) {
        std::vector<double> vals;
        for (const Vector& a : alpha0) vals.push_back(a[static_cast<Eigen::Index>(i)]);
        res.factors.emplace_back(DirectionTable(res.directions, vals));
    }

    if (!e.analytic.empty()) {
        if (e.analytic.size() != k) throw InvalidSpec("factor_decomposition: one analytic factor per child");
        double worst = 0.0;
        int worst_factor = 0;
        Vector worst_probe = origin;
        std::vector<Vector> probes = res.directions;
        for (const Vector& v : res.directions) probes.push_back(2.5 * v);
        for (std::size_t j = 0; j < probes.size(); ++j)
            for (std::size_t i = 0; i < k; ++i) {
                const double r = std::abs(res.factors[i](probes[j]) - e.analytic[i](probes[j]));
                if (r > worst) {
                    worst = r;
                    worst_factor = static_cast<int>(i);
                    worst_probe = probes[j];
                }
            }
        res.analytic = worst;
        if (worst > tol)
            res.violations.push_back({"analytic", worst_factor, origin, worst_probe, worst});
    }
    return res;
}

} // namespace detail

/**
 * Decomposes an isometric embedding of a Euclidean space into a standard
 * two-factor product. alpha_i(a, v) = d_i(f(a)_i, f(a+v)_i) is evaluated on
 * the lattice base points and displacement directions of `grid`; the
 * recovered factor pseudonorms are direction tables of alpha_i(0, .).
 *
 * @throws NotIsometric if the embedding distorts a grid distance by > tol
 * @throws InvalidSpec unless the target is a two-factor product combined by
 *   p_combination(2)
 */
inline DecompositionResult factor_decomposition(const Embedding& e, const DecompositionGrid& grid = {},
                                                double tol = 1e-9) {
    if (e.target.is_leaf() || e.target.children().size() != 2 ||
        e.target.phi() != PhiSpec::p_combination(2, 2.0))
        throw InvalidSpec("factor_decomposition: target must be a standard two-factor product");
    return detail::decompose(e, grid, tol, false);
}

/**
 * Decomposition into a k-factor Phi-product; the verified identity is
 * Phi(alpha_1, ..., alpha_k) = |v|.
 *
 * @throws NotStrictlyConvex if Psi(x) = Phi(|x|) fails the sampled
 *   strict-convexity check
 * @throws NotIsometric as for factor_decomposition
 */
inline DecompositionResult generalized_factor_decomposition(const Embedding& e, const DecompositionGrid& grid = {},
                                                            double tol = 1e-9,
                                                            const SamplingOptions& convexity = {}) {
    if (e.target.is_leaf()) throw InvalidSpec("generalized_factor_decomposition: target must be a product");
    const ConvexityResult cv = check_psi_strict_convexity(e.target.phi(), convexity);
    if (!cv.strictly_convex)
        throw NotStrictlyConvex("generalized_factor_decomposition: Psi of " + e.target.phi().describe() +
                                " is not strictly convex");
    return detail::decompose(e, grid, tol, true);
}

/// Synthetic isometric embeddings with closed-form factors.
namespace scenarios {

/// v -> (v / sqrt 2, v / sqrt 2) from E^2 into E^2 x E^2.
inline Embedding diagonal() {
    const double s = 1.0 / std::sqrt(2.0);
    auto half = [s](const Vector& v) { return s * v.norm(); };
    return {"diagonal", NormSpec::euclidean(2),
            standard_product({SpaceHandle::leaf(NormSpec::euclidean(2)), SpaceHandle::leaf(NormSpec::euclidean(2))}),
            [s](const Vector& v) { return join_point({Vector(s * v), Vector(s * v)}); },
            {half, half}};
}

/// v -> (v, 0.7) from E^2 into E^2 x E^1.
inline Embedding axis() {
    return {"axis", NormSpec::euclidean(2),
            standard_product({SpaceHandle::leaf(NormSpec::euclidean(2)), SpaceHandle::leaf(NormSpec::euclidean(1))}),
            [](const Vector& v) { return join_point({v, make_vector({0.7})}); },
            {[](const Vector& v) { return v.norm(); }, [](const Vector&) { return 0.0; }}};
}

/// (x, y) -> (x, y) from (R^2, Psi) into R x R, Psi from p_combination(2).
inline Embedding coordinate_split() {
    return {"coordinate_split", NormSpec::p_norm(2, 2.0),
            SpaceHandle::product({SpaceHandle::leaf(NormSpec::euclidean(1)), SpaceHandle::leaf(NormSpec::euclidean(1))},
                                 PhiSpec::p_combination(2, 2.0)),
            [](const Vector& v) { return Vector(v); },
            {[](const Vector& v) { return std::abs(v[0]); }, [](const Vector& v) { return std::abs(v[1]); }}};
}

/// Coordinate split of (R^k, Psi) into k lines, Psi from p_combination(p).
inline Embedding coordinate_split_lp(int k, double p) {
    std::vector<SpaceHandle> lines(static_cast<std::size_t>(k), SpaceHandle::leaf(NormSpec::euclidean(1)));
    std::vector<std::function<double(const Vector&)>> an;
    for (int i = 0; i < k; ++i) an.push_back([i](const Vector& v) { return std::abs(v[i]); });
    return {"coordinate_split_p" + std::to_string(static_cast<int>(p)) + "_k" + std::to_string(k),
            NormSpec::p_norm(k, p), SpaceHandle::product(std::move(lines), PhiSpec::p_combination(k, p)),
            [](const Vector& v) { return Vector(v); }, std::move(an)};
}

/// Coordinate split of (R^2, max) into R x R under max_combination.
inline Embedding coordinate_split_max() {
    return {"coordinate_split_max", NormSpec::p_norm(2, std::numeric_limits<double>::infinity()),
            SpaceHandle::product({SpaceHandle::leaf(NormSpec::euclidean(1)), SpaceHandle::leaf(NormSpec::euclidean(1))},
                                 PhiSpec::max_combination(2)),
            [](const Vector& v) { return Vector(v); },
            {[](const Vector& v) { return std::abs(v[0]); }, [](const Vector& v) { return std::abs(v[1]); }}};
}

/// A shear of E^2 into R x R; not isometric.
inline Embedding shear() {
    return {"shear", NormSpec::euclidean(2),
            standard_product({SpaceHandle::leaf(NormSpec::euclidean(1)), SpaceHandle::leaf(NormSpec::euclidean(1))}),
            [](const Vector& v) { return make_vector({v[0] + 0.5 * v[1], v[1]}); },
            {}};
}

} // namespace scenarios

/// sqrt(||v||_1^2 + ||w||_2^2) on R^{d1 + d2}, split as (v, w).
struct CombinedNorm {
    NormSpec first;
    NormSpec second;

    int dim() const noexcept { return first.dim() + second.dim(); }
    double operator()(const Vector& x) const {
        require_dim(x, dim(), "CombinedNorm");
        const double a = norm_eval(first, Vector(x.head(first.dim())));
        const double b = norm_eval(second, Vector(x.tail(second.dim())));
        return std::hypot(a, b);
    }
};

struct SuperadditiveWitness {
    CombinedNorm combined;
    SpaceHandle product;
    /// max |d_product(i(x), i(y)) - combined(y - x)| relative to combined(y - x).
    double isometry_residual = 0.0;
    std::size_t samples = 0;
};

/**
 * The direct sum of two normed spaces under the Euclidean combination, and
 * the sampled residual of its inclusion (v, w) -> (v, w) into the standard
 * product of the two leaves.
 */
inline SuperadditiveWitness minkowski_superadditive_embed(const NormSpec& norm1, const NormSpec& norm2,
                                                          std::size_t sample_count = 10000,
                                                          std::uint64_t seed = default_seed) {
    SuperadditiveWitness w{CombinedNorm{norm1, norm2},
                           standard_product({SpaceHandle::leaf(norm1), SpaceHandle::leaf(norm2)}), 0.0, 0};
    Rng rng = substream(seed, 40);
    const int d = w.combined.dim();
    for (std::size_t s = 0; s < sample_count; ++s) {
        const Vector x = gaussian_vector(rng, d) * log_uniform(rng, 1e-2, 1e2);
        const Vector y = gaussian_vector(rng, d) * log_uniform(rng, 1e-2, 1e2);
        const double ref = w.combined(Vector(y - x));
        const double got = distance(w.product, x, y);
        ++w.samples;
        if (ref > 0.0) w.isometry_residual = std::max(w.isometry_residual, std::abs(got - ref) / ref);
    }
    return w;
}

} // namespace mvrank

#endif
