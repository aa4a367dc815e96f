#ifndef MVRANK_PSEUDONORM_HPP
#define MVRANK_PSEUDONORM_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "mvrank/errors.hpp"
#include "mvrank/norms.hpp"
#include "mvrank/random.hpp"
#include "mvrank/vector.hpp"

namespace mvrank {

/**
 * @brief A 1-homogeneous functional tabulated on unit directions.
 *
 * Values off the table are interpolated on the sphere and extended by
 * ||v|| := |v|_e * value(v / |v|_e). In the plane the interpolation is
 * linear in the polar angle; in higher dimension it is inverse-angle
 * weighting over the dim nearest directions. Table directions themselves are
 * reproduced exactly.
 */
class DirectionTable {
public:
    DirectionTable() = default;
    DirectionTable(std::vector<Vector> directions, std::vector<double> values)
        : directions_(std::move(directions)), values_(std::move(values)) {
        if (directions_.empty() || directions_.size() != values_.size())
            throw InvalidSpec("DirectionTable: need one value per direction");
        dim_ = static_cast<int>(directions_.front().size());
        for (auto& d : directions_) {
            require_dim(d, dim_, "DirectionTable");
            d.normalize();
        }
        if (dim_ == 2) {
            order_.resize(directions_.size());
            for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
            std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
                return polar(directions_[a]) < polar(directions_[b]);
            });
        }
    }

    int dim() const noexcept { return dim_; }
    const std::vector<Vector>& directions() const noexcept { return directions_; }
    const std::vector<double>& values() const noexcept { return values_; }

    double operator()(const Vector& v) const {
        require_dim(v, dim_, "DirectionTable");
        const double r = v.norm();
        if (r == 0.0) return 0.0;
        return r * on_sphere(v / r);
    }

private:
    static double polar(const Vector& u) {
        const double a = std::atan2(u[1], u[0]);
        return a < 0.0 ? a + 2.0 * std::numbers::pi : a;
    }

    double on_sphere(const Vector& u) const {
        constexpr double exact = 1e-12;
        if (dim_ == 1) {
            for (std::size_t i = 0; i < directions_.size(); ++i)
                if (directions_[i][0] * u[0] > 0.0) return values_[i];
            return values_.front();
        }
        if (dim_ == 2) {
            const double a = polar(u);
            const std::size_t m = order_.size();
            // first sorted direction with angle > a
            std::size_t hi = 0;
            while (hi < m && polar(directions_[order_[hi]]) <= a) ++hi;
            const std::size_t lo_i = order_[(hi + m - 1) % m];
            const std::size_t hi_i = order_[hi % m];
            double alo = polar(directions_[lo_i]);
            double ahi = polar(directions_[hi_i]);
            if (std::abs(a - alo) < exact) return values_[lo_i];
            if (ahi <= alo) ahi += 2.0 * std::numbers::pi;
            double aa = a;
            if (aa < alo) aa += 2.0 * std::numbers::pi;
            const double t = (aa - alo) / (ahi - alo);
            return (1.0 - t) * values_[lo_i] + t * values_[hi_i];
        }
        std::vector<std::pair<double, std::size_t>> near;
        near.reserve(directions_.size());
        for (std::size_t i = 0; i < directions_.size(); ++i) {
            const double ang = angle_between(u, directions_[i]);
            if (ang < exact) return values_[i];
            near.emplace_back(ang, i);
        }
        const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(dim_), near.size());
        std::partial_sort(near.begin(), near.begin() + static_cast<std::ptrdiff_t>(k), near.end());
        double wsum = 0.0, acc = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            const double w = 1.0 / near[j].first;
            wsum += w;
            acc += w * values_[near[j].second];
        }
        return acc / wsum;
    }

    int dim_ = 0;
    std::vector<Vector> directions_;
    std::vector<double> values_;
    std::vector<std::size_t> order_;
};

/// v -> norm(P v) for a linear map P : R^dim -> R^{norm.dim()}.
struct ComposedPseudonorm {
    NormSpec norm;
    Matrix projection;
};

/**
 * @brief A positively homogeneous, subadditive functional that may vanish on
 * a non-trivial subspace.
 *
 * Either a closed-form norm composed with a linear map, or a direction table
 * (the form in which factor decomposition recovers pseudonorms).
 */
class Pseudonorm {
public:
    using Base = std::variant<NormSpec, ComposedPseudonorm, DirectionTable>;

    explicit Pseudonorm(NormSpec n) : base_(std::move(n)) {}
    explicit Pseudonorm(DirectionTable t) : base_(std::move(t)) {}
    Pseudonorm(NormSpec n, Matrix projection) {
        if (projection.rows() != n.dim())
            throw DimensionMismatch("Pseudonorm: projection rows must equal norm dimension");
        base_ = ComposedPseudonorm{std::move(n), std::move(projection)};
    }

    /// |x_axis| on R^dim.
    static Pseudonorm coordinate(int dim, int axis) {
        Matrix p = Matrix::Zero(1, dim);
        p(0, axis) = 1.0;
        return Pseudonorm(NormSpec::euclidean(1), std::move(p));
    }

    int dim() const {
        return std::visit(
            [](const auto& b) -> int {
                using T = std::decay_t<decltype(b)>;
                if constexpr (std::is_same_v<T, ComposedPseudonorm>)
                    return static_cast<int>(b.projection.cols());
                else
                    return b.dim();
            },
            base_);
    }

    double operator()(const Vector& v) const {
        return std::visit(
            [&](const auto& b) -> double {
                using T = std::decay_t<decltype(b)>;
                if constexpr (std::is_same_v<T, ComposedPseudonorm>) {
                    require_dim(v, b.projection.cols(), "Pseudonorm");
                    return norm_eval(b.norm, b.projection * v);
                } else {
                    return b(v);
                }
            },
            base_);
    }

    const Base& base() const noexcept { return base_; }
    const DirectionTable* table() const noexcept { return std::get_if<DirectionTable>(&base_); }

private:
    Base base_;
};

struct KernelOptions {
    double tol = 1e-9;
    /// A minimum in (tol, ambiguity_factor * tol] is reported as ambiguous.
    double ambiguity_factor = 10.0;
    int random_directions = 256;
    int refine_starts = 6;
};

namespace detail {

inline std::vector<Vector> candidate_coefficients(int r, int random_count) {
    std::vector<Vector> out;
    for (int i = 0; i < r; ++i) out.push_back(unit_vector(r, i));
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) {
            out.push_back((unit_vector(r, i) + unit_vector(r, j)).normalized());
            out.push_back((unit_vector(r, i) - unit_vector(r, j)).normalized());
        }
    if (r >= 2) {
        Rng rng = substream(0x6b65726e656cULL, static_cast<std::uint64_t>(r));
        for (int s = 0; s < random_count; ++s) out.push_back(random_unit(rng, r));
    }
    return out;
}

/// Pattern search for a minimum of f on the unit sphere of R^r.
template <class F>
std::pair<Vector, double> sphere_pattern_search(const F& f, Vector c) {
    c.normalize();
    double best = f(c);
    const int r = static_cast<int>(c.size());
    for (double step = 0.2; step > 1e-13; step *= 0.5) {
        bool improved = true;
        int guard = 0;
        while (improved && guard++ < 200) {
            improved = false;
            for (int j = 0; j < r; ++j)
                for (double sgn : {1.0, -1.0}) {
                    Vector trial = c;
                    trial[j] += sgn * step;
                    trial.normalize();
                    const double val = f(trial);
                    if (val < best) {
                        best = val;
                        c = trial;
                        improved = true;
                    }
                }
        }
    }
    return {c, best};
}

} // namespace detail

/**
 * Maximal list of orthonormal directions on which `p` vanishes within tol.
 *
 * Works by deflation: in the orthogonal complement of the directions found so
 * far, p is minimized over the unit sphere (structured and seeded random
 * starts, table directions for tabulated pseudonorms, then pattern search).
 * A minimum <= tol adds a kernel direction; otherwise the search stops.
 * Returns an empty list for a true norm.
 *
 * @throws RankAmbiguity when the smallest non-vanishing value is within
 * ambiguity_factor * tol, i.e. rank cannot be resolved at this tolerance.
 */
template <class P>
std::vector<Vector> kernel_basis(const P& p, const KernelOptions& opts = {}) {
    const int dim = p.dim();
    std::vector<Vector> basis;
    std::vector<Vector> table_dirs;
    if constexpr (std::is_same_v<P, Pseudonorm>) {
        if (const auto* t = p.table()) table_dirs = t->directions();
    } else if constexpr (std::is_same_v<P, DirectionTable>) {
        table_dirs = p.directions();
    }

    while (static_cast<int>(basis.size()) < dim) {
        const Matrix q = orthogonal_complement(basis, dim);
        const int r = static_cast<int>(q.cols());
        auto f = [&](const Vector& c) { return p(Vector(q * c)); };

        std::vector<std::pair<double, Vector>> starts;
        for (const Vector& c : detail::candidate_coefficients(r, opts.random_directions))
            starts.emplace_back(f(c), c);
        for (const Vector& d : table_dirs) {
            Vector c = q.transpose() * d;
            if (c.norm() > 1e-6) {
                c.normalize();
                starts.emplace_back(f(c), c);
            }
        }
        const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(opts.refine_starts), starts.size());
        std::partial_sort(starts.begin(), starts.begin() + static_cast<std::ptrdiff_t>(k), starts.end(),
                          [](const auto& a, const auto& b) { return a.first < b.first; });

        Vector best_c = starts.front().second;
        double best = starts.front().first;
        for (std::size_t i = 0; i < k && best > opts.tol; ++i) {
            auto [c, val] = detail::sphere_pattern_search(f, starts[i].second);
            if (val < best) {
                best = val;
                best_c = c;
            }
        }
        if (best <= opts.tol) {
            basis.push_back((q * best_c).normalized());
            continue;
        }
        if (best <= opts.ambiguity_factor * opts.tol)
            throw RankAmbiguity("kernel_basis: minimum " + std::to_string(best) +
                                " is within the ambiguity band above tol");
        break;
    }
    return basis;
}

} // namespace mvrank

#endif
