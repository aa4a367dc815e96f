#ifndef MVRANK_CURVES_HPP
#define MVRANK_CURVES_HPP

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "mvrank/errors.hpp"
#include "mvrank/product_space.hpp"
#include "mvrank/vector.hpp"

namespace mvrank {

/**
 * @brief Piecewise-linear curve c : [0, 1] -> X through flat points.
 *
 * `params` are the parameter values of the vertices; 0 = t_0 <= ... <= t_k = 1.
 */
struct PolygonalCurve {
    std::vector<Vector> vertices;
    std::vector<double> params;

    static PolygonalCurve uniform(std::vector<Vector> vertices) {
        PolygonalCurve c;
        const std::size_t k = vertices.size();
        c.vertices = std::move(vertices);
        c.params.resize(k);
        for (std::size_t j = 0; j < k; ++j)
            c.params[j] = (k > 1) ? static_cast<double>(j) / static_cast<double>(k - 1) : 0.0;
        if (k > 1) c.params.back() = 1.0;
        c.validate();
        return c;
    }

    void validate() const {
        if (vertices.size() < 2) throw InvalidSpec("PolygonalCurve: needs at least two vertices");
        if (params.size() != vertices.size())
            throw InvalidSpec("PolygonalCurve: one parameter per vertex required");
        if (params.front() != 0.0 || params.back() != 1.0)
            throw InvalidSpec("PolygonalCurve: parameters must start at 0 and end at 1");
        for (std::size_t j = 1; j < params.size(); ++j)
            if (params[j] < params[j - 1]) throw InvalidSpec("PolygonalCurve: parameters must be nondecreasing");
        for (const auto& v : vertices) {
            require_dim(v, vertices.front().size(), "PolygonalCurve");
            require_finite(v, "PolygonalCurve");
        }
    }
};

/**
 * Length of a polygonal curve: each polygon segment is split into
 * `refinement` equal parameter steps and the chord distances are summed
 * (pairwise summation).
 *
 * In a normed leaf, or any product whose Phi induces a norm, segments are
 * geodesic and the result is independent of the refinement.
 */
inline double curve_length(const SpaceHandle& space, const PolygonalCurve& curve, int refinement) {
    if (refinement < 1) throw InvalidSpec("curve_length: refinement must be >= 1");
    curve.validate();
    require_dim(curve.vertices.front(), space.point_dim(), "curve_length");
    std::vector<double> chords;
    chords.reserve((curve.vertices.size() - 1) * static_cast<std::size_t>(refinement));
    for (std::size_t j = 1; j < curve.vertices.size(); ++j) {
        const Vector& a = curve.vertices[j - 1];
        const Vector& b = curve.vertices[j];
        Vector prev = a;
        for (int s = 1; s <= refinement; ++s) {
            const Vector next = (s == refinement) ? b : Vector(a + (static_cast<double>(s) / refinement) * (b - a));
            chords.push_back(distance(space, prev, next));
            prev = next;
        }
    }
    return pairwise_sum(chords);
}

/**
 * Reads a plain-text vertex table: one vertex per row, comma or whitespace
 * separated, '#' starts a comment. Rows of point_dim values get uniform
 * parameters; rows of point_dim + 1 values carry their parameter first.
 */
inline PolygonalCurve read_curve_table(std::istream& in, int point_dim) {
    std::vector<std::vector<double>> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        std::vector<double> row;
        std::string tok;
        while (ls >> tok) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(tok, &used));
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw ConfigError("curve table line " + std::to_string(lineno) + ": bad number '" + tok + "'");
            }
        }
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ConfigError("curve table: no vertex rows");
    const std::size_t width = rows.front().size();
    const bool with_params = static_cast<int>(width) == point_dim + 1;
    if (!with_params && static_cast<int>(width) != point_dim)
        throw ConfigError("curve table: rows must have " + std::to_string(point_dim) + " or " +
                          std::to_string(point_dim + 1) + " values");
    std::vector<Vector> verts;
    std::vector<double> params;
    for (const auto& r : rows) {
        if (r.size() != width) throw ConfigError("curve table: ragged rows");
        Vector v(point_dim);
        for (int i = 0; i < point_dim; ++i) v[i] = r[static_cast<std::size_t>(i + (with_params ? 1 : 0))];
        verts.push_back(v);
        if (with_params) params.push_back(r[0]);
    }
    if (!with_params) return PolygonalCurve::uniform(std::move(verts));
    PolygonalCurve c{std::move(verts), std::move(params)};
    c.validate();
    return c;
}

/// c(t) = center + radius (cos 2 pi t b1 + sin 2 pi t b2); b1, b2 are
/// orthonormalized on construction.
struct CircleCurve {
    Vector center, b1, b2;
    double radius = 1.0;

    CircleCurve(Vector c, Vector u, Vector w, double r) : center(std::move(c)), radius(r) {
        b1 = u.normalized();
        b2 = w - w.dot(b1) * b1;
        if (b2.norm() < 1e-12) throw DegenerateInput("CircleCurve: dependent plane basis");
        b2.normalize();
    }

    /// Circle of the given radius in the first two coordinates of R^dim.
    static CircleCurve planar(int dim, double r) {
        return CircleCurve(Vector::Zero(dim), unit_vector(dim, 0), unit_vector(dim, 1), r);
    }

    Vector at(double t) const {
        const double a = 2.0 * std::numbers::pi * t;
        return center + radius * (std::cos(a) * b1 + std::sin(a) * b2);
    }
};

/// c(t) = from + t (to - from).
struct SegmentCurve {
    Vector from, to;
    Vector at(double t) const { return from + t * (to - from); }
};

using ComponentCurve = std::variant<CircleCurve, SegmentCurve>;

inline Vector evaluate(const ComponentCurve& c, double t) {
    return std::visit([&](const auto& x) { return x.at(t); }, c);
}

/**
 * Closed-form length of a component curve in `factor`: |to - from| for a
 * segment, 2 pi r ||b1|| for a circle (exact when the factor's metric is a
 * multiple of the Euclidean one on the circle's plane, which constant chord
 * speed requires).
 */
inline double component_length(const SpaceHandle& factor, const ComponentCurve& c) {
    return std::visit(
        [&](const auto& x) -> double {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, SegmentCurve>)
                return distance(factor, x.from, x.to);
            else
                return 2.0 * std::numbers::pi * x.radius *
                       distance(factor, Vector::Zero(x.b1.size()), x.b1);
        },
        c);
}

struct ProductLengthCheck {
    int refinement = 0;
    double length = 0.0;        ///< L_N of the product curve
    double target = 0.0;        ///< Phi(l_1, ..., l_k)
    double gap = 0.0;           ///< |L_N - target|
    std::vector<double> component_lengths;
};

/**
 * Length of the product curve c = (c_1, ..., c_k) along the uniform
 * subdivision with N steps, compared with Phi(l_1, ..., l_k).
 *
 * @throws ArclengthViolation if a component's chord lengths at this
 *   subdivision spread by more than speed_tol relative to their maximum
 */
inline ProductLengthCheck product_curve_length_check(const SpaceHandle& product,
                                                     const std::vector<ComponentCurve>& components,
                                                     int refinement, double speed_tol = 1e-6) {
    if (product.is_leaf()) throw InvalidSpec("product_curve_length_check: space must be a product");
    if (refinement < 1) throw InvalidSpec("product_curve_length_check: refinement must be >= 1");
    const auto& ch = product.children();
    if (components.size() != ch.size())
        throw InvalidSpec("product_curve_length_check: one component curve per factor required");
    const std::size_t k = ch.size();
    ProductLengthCheck res;
    res.refinement = refinement;

    std::vector<Vector> prev(k);
    for (std::size_t i = 0; i < k; ++i) {
        prev[i] = evaluate(components[i], 0.0);
        require_dim(prev[i], ch[i].point_dim(), "product_curve_length_check");
        res.component_lengths.push_back(component_length(ch[i], components[i]));
    }
    std::vector<double> lo(k, std::numeric_limits<double>::infinity()), hi(k, 0.0);
    std::vector<double> chords;
    chords.reserve(static_cast<std::size_t>(refinement));
    Vector q(static_cast<Eigen::Index>(k));
    for (int j = 1; j <= refinement; ++j) {
        const double t = static_cast<double>(j) / refinement;
        for (std::size_t i = 0; i < k; ++i) {
            const Vector next = evaluate(components[i], t);
            const double d = distance(ch[i], prev[i], next);
            q[static_cast<Eigen::Index>(i)] = d;
            lo[i] = std::min(lo[i], d);
            hi[i] = std::max(hi[i], d);
            prev[i] = next;
        }
        chords.push_back(phi_eval(product.phi(), q));
    }
    for (std::size_t i = 0; i < k; ++i)
        if (hi[i] > 0.0 && (hi[i] - lo[i]) > speed_tol * hi[i])
            throw ArclengthViolation("component " + std::to_string(i) +
                                         " is not parametrized proportionally to arclength",
                                     static_cast<int>(i));
    res.length = pairwise_sum(chords);
    res.target = phi_eval(product.phi(), Vector(Eigen::Map<const Vector>(res.component_lengths.data(),
                                                                         static_cast<Eigen::Index>(k))));
    res.gap = std::abs(res.length - res.target);
    return res;
}

} // namespace mvrank

#endif
