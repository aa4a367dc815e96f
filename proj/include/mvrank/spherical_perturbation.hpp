#ifndef MVRANK_SPHERICAL_PERTURBATION_HPP
#define MVRANK_SPHERICAL_PERTURBATION_HPP

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "mvrank/errors.hpp"
#include "mvrank/vector.hpp"

/**
 * @file spherical_perturbation.hpp
 *
 * Perturbation profiles on S^2 that deform the Euclidean unit sphere into the
 * unit spheres of two norms on R^3. Both profiles equal 1 on eight circles
 * (four parallel to the equator z = 0, four parallel to the great circle
 * y = 0) and satisfy phi1^2 + phi2^2 = 2 pointwise.
 */

namespace mvrank::counterexample {

/// Colatitudes of the four circles, parallel to the equator, on which the
/// polar profile vanishes.
inline constexpr std::array<double, 4> null_colatitudes = {
    std::numbers::pi / 4.0, 3.0 * std::numbers::pi / 8.0,
    5.0 * std::numbers::pi / 8.0, 3.0 * std::numbers::pi / 4.0};

/**
 * Polar profile (1/n) * prod_{k=2,3} sin(theta + k pi/8) sin(theta + (8-k) pi/8).
 *
 * Depends on the colatitude only and is invariant under theta -> pi - theta.
 *
 * @param colatitude Angle from the +z axis, in [0, pi].
 * @param n Positive scale denominator.
 */
inline double epsilon_tilde(double colatitude, long long n) {
    constexpr double pi = std::numbers::pi;
    // Rounding in atan2-derived colatitudes can overshoot the interval by an ulp.
    constexpr double slack = 1e-12;
    if (!(colatitude >= -slack && colatitude <= pi + slack))
        throw DomainError("epsilon_tilde: colatitude outside [0, pi]");
    if (n < 1) throw DomainError("epsilon_tilde: n must be >= 1");
    double prod = 1.0;
    for (int k = 2; k <= 3; ++k) {
        prod *= std::sin(colatitude + k * pi / 8.0) *
                std::sin(colatitude + (8 - k) * pi / 8.0);
    }
    return prod / static_cast<double>(n);
}

/**
 * The same profile in terms of s2 = sin^2(theta): each sine pair equals
 * sin^2(k pi/8) - sin^2(theta), so the value is
 * (1/n) (sin^2(pi/4) - s2)(sin^2(3 pi/8) - s2).
 */
inline double epsilon_tilde_sin2(double s2, long long n) {
    constexpr double slack = 1e-12;
    if (!(s2 >= -slack && s2 <= 1.0 + slack)) throw DomainError("epsilon_tilde_sin2: s2 outside [0, 1]");
    if (n < 1) throw DomainError("epsilon_tilde_sin2: n must be >= 1");
    constexpr double a = 0.5;                                   // sin^2(pi/4)
    constexpr double b = 0.85355339059327376220042218105242452; // sin^2(3 pi/8)
    return (a - s2) * (b - s2) / static_cast<double>(n);
}

/// Colatitude of a non-zero vector of R^3 measured from +z.
inline double colatitude(const Vector& u) {
    return std::atan2(std::hypot(u[0], u[1]), u[2]);
}

/// Rotation (x, y, z) -> (x, z, -y). It takes the great circle y = 0 onto the
/// equator, so circles parallel to y = 0 become circles of constant colatitude.
inline Vector axis_frame(const Vector& u) {
    return make_vector({u[0], u[2], -u[1]});
}

inline Vector axis_frame_inverse(const Vector& u) {
    return make_vector({u[0], -u[2], u[1]});
}

namespace detail {

inline void require_unit3(const Vector& u, const char* what) {
    require_dim(u, 3, what);
    require_finite(u, what);
    if (std::abs(u.norm() - 1.0) > 1e-9)
        throw DomainError(std::string(what) + ": argument is not a unit vector");
}

} // namespace detail

/// Polar profile evaluated at a unit vector. Uses sin^2 of the colatitude
/// from squared coordinates, so it is exactly invariant under u -> -u.
inline double epsilon_tilde_at(const Vector& u, long long n) {
    detail::require_unit3(u, "epsilon_tilde_at");
    return epsilon_tilde_sin2((u[0] * u[0] + u[1] * u[1]) / u.squaredNorm(), n);
}

/// The same profile with its null circles parallel to the great circle y = 0:
/// the polar profile of axis_frame(u) = (x, z, -y).
inline double epsilon_hat(const Vector& u, long long n) {
    detail::require_unit3(u, "epsilon_hat");
    return epsilon_tilde_sin2((u[0] * u[0] + u[2] * u[2]) / u.squaredNorm(), n);
}

inline double phi1(const Vector& u, long long n) {
    return 1.0 + epsilon_tilde_at(u, n) * epsilon_hat(u, n);
}

inline double phi2(const Vector& u, long long n) {
    const double p = phi1(u, n);
    const double rest = 2.0 - p * p;
    if (!(rest > 0.0)) throw DomainError("phi2: 2 - phi1^2 is not positive");
    return std::sqrt(rest);
}

/// Point at azimuth `azimuth` on null circle `index`. Indices 0..3 are the
/// circles of constant colatitude; 4..7 their images parallel to y = 0.
inline Vector null_circle_point(int index, double azimuth) {
    if (index < 0 || index > 7) throw DomainError("null_circle_point: index outside 0..7");
    const double theta = null_colatitudes[static_cast<std::size_t>(index % 4)];
    const Vector p = make_vector({std::sin(theta) * std::cos(azimuth),
                                  std::sin(theta) * std::sin(azimuth), std::cos(theta)});
    return index < 4 ? p : axis_frame_inverse(p);
}

/**
 * The spherically perturbed pair of norms
 *   ||v||_1 = phi1(v/|v|) |v|,   ||v||_2 = sqrt(2 - phi1^2)(v/|v|) |v|.
 */
struct SphericalPerturbation {
    long long n = 1;

    double profile(int factor, const Vector& u) const {
        return factor == 1 ? phi1(u, n) : phi2(u, n);
    }

    /// Norm `factor` of v; 0 for the zero vector.
    double norm(int factor, const Vector& v) const {
        const double r = v.norm();
        if (r == 0.0) return 0.0;
        return profile(factor, v / r) * r;
    }
};

} // namespace mvrank::counterexample

#endif
