#ifndef MVRANK_CONIC_HPP
#define MVRANK_CONIC_HPP

#include <array>
#include <cmath>
#include <vector>

#include <Eigen/SVD>

#include "mvrank/errors.hpp"
#include "mvrank/vector.hpp"

namespace mvrank {

using Point2 = Eigen::Vector2d;

/**
 * @brief Plane quadratic curve A x^2 + B xy + C y^2 + D x + E y + F = 0.
 *
 * Coefficients are kept at unit Euclidean norm with the first non-negligible
 * coefficient positive, so equal conics have equal coefficient vectors.
 */
struct Conic {
    std::array<double, 6> coeffs{};

    static Conic normalized(std::array<double, 6> c) {
        double s = 0.0;
        for (double x : c) s += x * x;
        s = std::sqrt(s);
        if (!(s > 0.0)) throw DegenerateInput("Conic: zero coefficient vector");
        double sign = 1.0;
        for (double x : c)
            if (std::abs(x) > 1e-12 * s) {
                sign = x > 0.0 ? 1.0 : -1.0;
                break;
            }
        for (double& x : c) x *= sign / s;
        return Conic{c};
    }

    double A() const noexcept { return coeffs[0]; }
    double B() const noexcept { return coeffs[1]; }
    double C() const noexcept { return coeffs[2]; }

    double discriminant() const noexcept { return B() * B() - 4.0 * A() * C(); }
    bool is_ellipse() const noexcept { return discriminant() < 0.0; }

    /// Algebraic distance; with unit coefficients this is the fit residual.
    double eval(const Point2& p) const noexcept {
        const double x = p.x(), y = p.y();
        return coeffs[0] * x * x + coeffs[1] * x * y + coeffs[2] * y * y + coeffs[3] * x +
               coeffs[4] * y + coeffs[5];
    }

    /// Largest coefficient difference up to sign.
    double distance_to(const Conic& o) const noexcept {
        double plus = 0.0, minus = 0.0;
        for (std::size_t i = 0; i < 6; ++i) {
            plus = std::max(plus, std::abs(coeffs[i] - o.coeffs[i]));
            minus = std::max(minus, std::abs(coeffs[i] + o.coeffs[i]));
        }
        return std::min(plus, minus);
    }
};

struct ConicFit {
    Conic conic;
    /// max |conic(p)| over the points after the first five; 0 if none.
    double residual = 0.0;
};

/**
 * Exact conic through the first five points (null space of the 5x6 design
 * matrix), with its residual on the remaining points.
 *
 * @throws DegenerateInput if the first five points do not determine a
 *   unique conic (design rank < 5)
 */
inline ConicFit fit_conic(const std::vector<Point2>& points) {
    if (points.size() < 5) throw InvalidSpec("fit_conic: at least five points required");
    Matrix design(5, 6);
    for (int i = 0; i < 5; ++i) {
        const double x = points[static_cast<std::size_t>(i)].x();
        const double y = points[static_cast<std::size_t>(i)].y();
        if (!std::isfinite(x) || !std::isfinite(y)) throw NonFiniteInput("fit_conic: non-finite point");
        design.row(i) << x * x, x * y, y * y, x, y, 1.0;
    }
    Eigen::JacobiSVD<Matrix> svd(design, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (!(sv[4] > 1e-10 * sv[0])) throw DegenerateInput("fit_conic: first five points are degenerate");
    const Vector nullv = svd.matrixV().col(5);
    ConicFit fit{Conic::normalized({nullv[0], nullv[1], nullv[2], nullv[3], nullv[4], nullv[5]}), 0.0};
    for (std::size_t i = 5; i < points.size(); ++i)
        fit.residual = std::max(fit.residual, std::abs(fit.conic.eval(points[i])));
    return fit;
}

} // namespace mvrank

#endif
