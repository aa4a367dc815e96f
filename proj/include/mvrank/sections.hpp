#ifndef MVRANK_SECTIONS_HPP
#define MVRANK_SECTIONS_HPP

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "mvrank/conic.hpp"
#include "mvrank/errors.hpp"
#include "mvrank/norm_checks.hpp"
#include "mvrank/norms.hpp"
#include "mvrank/random.hpp"
#include "mvrank/vector.hpp"

namespace mvrank {

/// A 2-plane through 0 spanned by orthonormal b1, b2.
struct Plane {
    Vector b1, b2;

    /// Gram-Schmidt on (u, w).
    static Plane spanned_by(const Vector& u, const Vector& w) {
        require_dim(w, u.size(), "Plane");
        require_finite(u, "Plane");
        require_finite(w, "Plane");
        const double nu = u.norm();
        if (!(nu > 0.0)) throw DegenerateInput("Plane: zero basis vector");
        Vector a = u / nu;
        Vector b = w - w.dot(a) * a;
        if (!(b.norm() > 1e-12 * std::max(1.0, w.norm()))) throw DegenerateInput("Plane: dependent basis");
        return Plane{a, b.normalized()};
    }

    static Plane random(Rng& rng, int dim) {
        const Vector u = random_unit(rng, dim);
        return Plane{u, random_tangent(rng, u)};
    }

    Vector direction(double angle) const { return std::cos(angle) * b1 + std::sin(angle) * b2; }
};

/**
 * @brief Boundary of a unit ball intersected with a plane.
 *
 * Sample j sits at angle 2 pi j / m; points[j] has norm 1 and plane
 * coordinates (cos a, sin a) * radii[j].
 */
struct PlaneSection {
    Plane plane;
    std::vector<double> angles;
    std::vector<double> radii;
    std::vector<Vector> points;

    std::vector<Point2> plane_coordinates() const {
        std::vector<Point2> out;
        out.reserve(angles.size());
        for (std::size_t j = 0; j < angles.size(); ++j)
            out.emplace_back(radii[j] * std::cos(angles[j]), radii[j] * std::sin(angles[j]));
        return out;
    }
};

template <NormLike N>
PlaneSection unit_ball_section(const N& norm, const Plane& plane, int m) {
    if (m < 16) throw InvalidSpec("unit_ball_section: m must be >= 16");
    require_dim(plane.b1, norm.dim(), "unit_ball_section");
    const Plane p = Plane::spanned_by(plane.b1, plane.b2);
    PlaneSection s{p, {}, {}, {}};
    for (int j = 0; j < m; ++j) {
        const double a = 2.0 * std::numbers::pi * j / m;
        const Vector d = p.direction(a);
        const double r = 1.0 / norm(d);
        s.angles.push_back(a);
        s.radii.push_back(r);
        s.points.push_back(r * d);
    }
    return s;
}

struct SectionTest {
    bool is_ellipse = false;
    double residual = 0.0;
    Conic conic;
};

namespace detail {

/// Five evenly spread sample indices first, then all others in order.
inline std::vector<Point2> fit_order(const std::vector<Point2>& pts) {
    const std::size_t m = pts.size();
    std::vector<bool> used(m, false);
    std::vector<Point2> out;
    for (std::size_t i = 0; i < 5; ++i) {
        const std::size_t j = i * m / 5;
        used[j] = true;
        out.push_back(pts[j]);
    }
    for (std::size_t j = 0; j < m; ++j)
        if (!used[j]) out.push_back(pts[j]);
    return out;
}

} // namespace detail

/**
 * Fits the conic through five evenly spread section points and measures the
 * residual on the other m - 5. Ellipse iff the residual is <= tol and the
 * fitted conic has negative discriminant.
 */
template <NormLike N>
SectionTest section_is_ellipse(const N& norm, const Plane& plane, int m, double tol) {
    const PlaneSection s = unit_ball_section(norm, plane, m);
    const ConicFit fit = fit_conic(detail::fit_order(s.plane_coordinates()));
    return SectionTest{fit.residual <= tol && fit.conic.is_ellipse(), fit.residual, fit.conic};
}

struct ObstructionOptions {
    int plane_count = 100;
    int samples_per_section = 256;
    std::uint64_t seed = default_seed;
    /// The Euclidean control must stay at or below this residual.
    double tol = 1e-9;
    /// A section is not an ellipse when its residual exceeds
    /// baseline_factor * max(euclidean baseline, DBL_EPSILON).
    double baseline_factor = 100.0;
};

struct ObstructionReport {
    int planes = 0;
    int not_ellipse = 0;
    double fraction_not_ellipse = 0.0;
    double min_residual = std::numeric_limits<double>::infinity();
    double max_residual = 0.0;
    /// Largest Euclidean residual over the same planes and density.
    double baseline_residual = 0.0;
    double threshold = 0.0;
    bool baseline_ok = true;
    /// Ratio of min_residual to the baseline.
    double separation = 0.0;
};

/**
 * Sweeps random 2-planes and counts those whose section is not an ellipse.
 * Fraction 1 means, at the sampled resolution, that no plane through 0
 * carries an ellipse section, hence no isometric copy of E^2 through 0.
 */
template <NormLike N>
ObstructionReport euclidean_flat_obstruction(const N& norm, const ObstructionOptions& opts = {}) {
    if (opts.plane_count < 1) throw InvalidSpec("euclidean_flat_obstruction: plane_count must be >= 1");
    const int dim = norm.dim();
    if (dim < 2) throw InvalidSpec("euclidean_flat_obstruction: dimension must be >= 2");
    const NormSpec euclid = NormSpec::euclidean(dim);
    std::vector<Plane> planes;
    std::vector<double> residuals;
    std::vector<bool> ellipse_class;
    ObstructionReport rep;
    for (int i = 0; i < opts.plane_count; ++i) {
        Rng rng = substream(opts.seed, 1000 + static_cast<std::uint64_t>(i));
        planes.push_back(Plane::random(rng, dim));
        const SectionTest base = section_is_ellipse(euclid, planes.back(), opts.samples_per_section, opts.tol);
        rep.baseline_residual = std::max(rep.baseline_residual, base.residual);
        const SectionTest t = section_is_ellipse(norm, planes.back(), opts.samples_per_section, opts.tol);
        residuals.push_back(t.residual);
        ellipse_class.push_back(t.conic.is_ellipse());
    }
    rep.baseline_ok = rep.baseline_residual <= opts.tol;
    rep.threshold = opts.baseline_factor * std::max(rep.baseline_residual, DBL_EPSILON);
    rep.planes = opts.plane_count;
    for (std::size_t i = 0; i < residuals.size(); ++i) {
        rep.min_residual = std::min(rep.min_residual, residuals[i]);
        rep.max_residual = std::max(rep.max_residual, residuals[i]);
        if (residuals[i] > rep.threshold || !ellipse_class[i]) ++rep.not_ellipse;
    }
    rep.fraction_not_ellipse = static_cast<double>(rep.not_ellipse) / rep.planes;
    rep.separation = rep.min_residual / std::max(rep.baseline_residual, DBL_EPSILON);
    return rep;
}

} // namespace mvrank

#endif
