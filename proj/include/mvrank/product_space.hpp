#ifndef MVRANK_PRODUCT_SPACE_HPP
#define MVRANK_PRODUCT_SPACE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mvrank/errors.hpp"
#include "mvrank/norm_checks.hpp"
#include "mvrank/norms.hpp"
#include "mvrank/phi.hpp"
#include "mvrank/random.hpp"
#include "mvrank/vector.hpp"

namespace mvrank {

/**
 * @brief A composition tree of metric spaces.
 *
 * A leaf is a normed space (R^d, ||.||). A product combines its children by
 * d_Phi(x, y) = Phi(d_1(x_1, y_1), ..., d_k(x_k, y_k)). Points of any space
 * are flat coordinate tuples: the concatenation of the leaf coordinates in
 * depth-first order. shape() lists the leaf dimensions in that order.
 */
class SpaceHandle {
public:
    static SpaceHandle leaf(NormSpec norm) {
        SpaceHandle s;
        s.norm_ = std::move(norm);
        s.point_dim_ = s.norm_->dim();
        return s;
    }

    static SpaceHandle product(std::vector<SpaceHandle> children, PhiSpec phi) {
        if (children.empty()) throw InvalidSpec("product: needs at least one child");
        if (phi.arity() != static_cast<int>(children.size()))
            throw InvalidSpec("product: phi arity " + std::to_string(phi.arity()) +
                              " does not match " + std::to_string(children.size()) + " children");
        SpaceHandle s;
        s.point_dim_ = 0;
        for (const auto& c : children) s.point_dim_ += c.point_dim();
        s.children_ = std::move(children);
        s.phi_ = std::move(phi);
        return s;
    }

    bool is_leaf() const noexcept { return norm_.has_value(); }
    const NormSpec& norm() const {
        if (!norm_) throw InvalidSpec("SpaceHandle: not a leaf");
        return *norm_;
    }
    const std::vector<SpaceHandle>& children() const noexcept { return children_; }
    const PhiSpec& phi() const {
        if (!phi_) throw InvalidSpec("SpaceHandle: not a product");
        return *phi_;
    }

    /// Length of the flat coordinate tuple of a point.
    int point_dim() const noexcept { return point_dim_; }

    std::vector<int> shape() const {
        std::vector<int> out;
        append_shape(out);
        return out;
    }

    /// Offset of child i inside a flat point of this product.
    int child_offset(std::size_t i) const {
        int off = 0;
        for (std::size_t j = 0; j < i; ++j) off += children_[j].point_dim();
        return off;
    }

    std::string describe() const {
        if (is_leaf()) return norm_->describe();
        std::string s = "product[" + phi_->describe() + "](";
        for (std::size_t i = 0; i < children_.size(); ++i)
            s += (i ? ", " : "") + children_[i].describe();
        return s + ")";
    }

private:
    void append_shape(std::vector<int>& out) const {
        if (is_leaf()) {
            out.push_back(point_dim_);
            return;
        }
        for (const auto& c : children_) c.append_shape(out);
    }

    std::optional<NormSpec> norm_;
    std::vector<SpaceHandle> children_;
    std::optional<PhiSpec> phi_;
    int point_dim_ = 0;
};

namespace detail {

inline double distance_at(const SpaceHandle& s, const double* x, const double* y) {
    if (s.is_leaf()) {
        const int d = s.point_dim();
        Vector diff(d);
        for (int i = 0; i < d; ++i) diff[i] = y[i] - x[i];
        return norm_eval(s.norm(), diff);
    }
    const auto& ch = s.children();
    Vector q(static_cast<Eigen::Index>(ch.size()));
    int off = 0;
    for (std::size_t i = 0; i < ch.size(); ++i) {
        q[static_cast<Eigen::Index>(i)] = distance_at(ch[i], x + off, y + off);
        off += ch[i].point_dim();
    }
    return phi_eval(s.phi(), q);
}

} // namespace detail

/// Distance between two flat points of `space`.
inline double distance(const SpaceHandle& space, const Vector& x, const Vector& y) {
    require_dim(x, space.point_dim(), "distance");
    require_dim(y, space.point_dim(), "distance");
    require_finite(x, "distance");
    require_finite(y, "distance");
    return detail::distance_at(space, x.data(), y.data());
}

/// The vector (d_1(x_1, y_1), ..., d_k(x_k, y_k)) of a product's children.
inline Vector factor_distances(const SpaceHandle& product, const Vector& x, const Vector& y) {
    require_dim(x, product.point_dim(), "factor_distances");
    require_dim(y, product.point_dim(), "factor_distances");
    const auto& ch = product.children();
    Vector q(static_cast<Eigen::Index>(ch.size()));
    for (std::size_t i = 0; i < ch.size(); ++i) {
        const int off = product.child_offset(i);
        q[static_cast<Eigen::Index>(i)] = detail::distance_at(ch[i], x.data() + off, y.data() + off);
    }
    return q;
}

/// Flat point of the product assembled from per-child points.
inline Vector join_point(const std::vector<Vector>& parts) {
    Eigen::Index n = 0;
    for (const auto& p : parts) n += p.size();
    Vector out(n);
    Eigen::Index off = 0;
    for (const auto& p : parts) {
        out.segment(off, p.size()) = p;
        off += p.size();
    }
    return out;
}

/// The Euclidean product sqrt(d_1^2 + ... + d_k^2), k >= 2.
inline SpaceHandle standard_product(std::vector<SpaceHandle> children) {
    if (children.size() < 2) throw InvalidSpec("standard_product: needs at least two children");
    const int k = static_cast<int>(children.size());
    return SpaceHandle::product(std::move(children), PhiSpec::p_combination(k, 2.0));
}

struct MetricAxiomReport {
    bool identity_ok = true;
    bool symmetry_ok = true;
    bool triangle_ok = true;
    double worst_violation = 0.0;
    std::size_t triples_checked = 0;
    /// (x, y, z) with d(x, z) > d(x, y) + d(y, z), or the failing pair.
    std::optional<std::array<Vector, 3>> witness;
    std::string failed_check;

    bool all_ok() const noexcept { return identity_ok && symmetry_ok && triangle_ok; }
};

/**
 * Sampled identity of indiscernibles, symmetry and triangle inequality.
 *
 * Collinear triples (x, midpoint, y) and (0, x, 2x) are checked before the
 * random stream since they expose non-subadditive combinations directly.
 */
inline MetricAxiomReport check_metric_axioms(const SpaceHandle& space, const SamplingOptions& opts = {}) {
    const int d = space.point_dim();
    MetricAxiomReport rep;
    Rng rng = substream(opts.seed, 20);

    auto fail = [&](bool& flag, double v, std::array<Vector, 3> w, const char* which) {
        rep.worst_violation = std::max(rep.worst_violation, v);
        if (v > opts.tol) {
            if (!rep.witness) {
                rep.witness = std::move(w);
                rep.failed_check = which;
            }
            flag = false;
        }
    };

    auto triple = [&](const Vector& x, const Vector& y, const Vector& z) {
        ++rep.triples_checked;
        const double dxx = distance(space, x, x);
        fail(rep.identity_ok, dxx == 0.0 ? 0.0 : std::max(1.0, dxx), {x, x, x}, "identity");
        const double dxy = distance(space, x, y), dyx = distance(space, y, x);
        if ((x - y).norm() > 0.0)
            fail(rep.identity_ok, dxy > 0.0 ? 0.0 : 1.0, {x, y, y}, "identity");
        fail(rep.symmetry_ok, std::abs(dxy - dyx) / std::max({dxy, dyx, std::numeric_limits<double>::min()}),
             {x, y, y}, "symmetry");
        const double dyz = distance(space, y, z), dxz = distance(space, x, z);
        fail(rep.triangle_ok,
             std::max(0.0, dxz - dxy - dyz) / std::max({dxy + dyz, dxz, std::numeric_limits<double>::min()}),
             {x, y, z}, "triangle");
    };

    for (int i = 0; i < d; ++i) {
        const Vector e = unit_vector(d, i);
        triple(Vector::Zero(d), e, Vector(2.0 * e));
    }
    const Vector ones = Vector::Ones(d);
    triple(Vector::Zero(d), Vector(0.5 * ones), ones);
    for (std::size_t s = 0; s < opts.sample_count; ++s) {
        const double scale = log_uniform(rng, 1e-2, 1e2);
        const Vector x = scale * gaussian_vector(rng, d);
        const Vector y = scale * gaussian_vector(rng, d);
        const Vector z = scale * gaussian_vector(rng, d);
        if (s % 4 == 3)
            triple(x, Vector(0.5 * (x + z)), z);
        else
            triple(x, y, z);
    }
    return rep;
}

} // namespace mvrank

#endif
