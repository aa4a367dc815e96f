#ifndef MVRANK_VECTOR_HPP
#define MVRANK_VECTOR_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "mvrank/errors.hpp"

namespace mvrank {

/// A point or direction of R^d. The library works at desk scale (d <= 8)
/// so a dynamic Eigen vector is used throughout.
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline Vector make_vector(std::initializer_list<double> coords) {
    Vector v(static_cast<Eigen::Index>(coords.size()));
    Eigen::Index i = 0;
    for (double c : coords) v[i++] = c;
    return v;
}

inline Vector unit_vector(int dim, int axis) {
    Vector v = Vector::Zero(dim);
    v[axis] = 1.0;
    return v;
}

inline bool all_finite(const Vector& v) {
    return std::all_of(v.data(), v.data() + v.size(),
                       [](double x) { return std::isfinite(x); });
}

inline void require_finite(const Vector& v, std::string_view what) {
    if (!all_finite(v))
        throw NonFiniteInput(std::string(what) + ": non-finite coordinate");
}

inline void require_dim(const Vector& v, Eigen::Index dim, std::string_view what) {
    if (v.size() != dim)
        throw DimensionMismatch(std::string(what) + ": expected dimension " +
                                std::to_string(dim) + ", got " +
                                std::to_string(v.size()));
}

/// Pairwise (cascade) summation. The split points depend only on the length
/// of the input, so the result is reproducible bit for bit.
inline double pairwise_sum(std::span<const double> xs) {
    constexpr std::size_t block = 8;
    if (xs.size() <= block) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

/// Euclidean angle between two non-zero vectors, computed with atan2 so that
/// nearly parallel pairs keep full relative accuracy.
inline double angle_between(const Vector& a, const Vector& b) {
    if (a.size() == 2) {
        const double cross = a[0] * b[1] - a[1] * b[0];
        return std::atan2(std::abs(cross), a.dot(b));
    }
    const Vector an = a.normalized();
    const Vector bn = b.normalized();
    return 2.0 * std::atan2((an - bn).norm(), (an + bn).norm());
}

/// Orthonormal basis of the orthogonal complement of span(basis) in R^dim.
inline Matrix orthogonal_complement(const std::vector<Vector>& basis, int dim) {
    if (basis.empty()) return Matrix::Identity(dim, dim);
    Matrix b(dim, static_cast<Eigen::Index>(basis.size()));
    for (std::size_t j = 0; j < basis.size(); ++j) b.col(static_cast<Eigen::Index>(j)) = basis[j];
    Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeFullU);
    const Eigen::Index rank = static_cast<Eigen::Index>(basis.size());
    return svd.matrixU().rightCols(dim - rank);
}

} // namespace mvrank

#endif
