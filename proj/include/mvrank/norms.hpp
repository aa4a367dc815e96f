#ifndef MVRANK_NORMS_HPP
#define MVRANK_NORMS_HPP

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mvrank/errors.hpp"
#include "mvrank/spherical_perturbation.hpp"
#include "mvrank/vector.hpp"

namespace mvrank {

enum class NormFamily { euclidean, p_norm, weighted_euclidean, perturbed_spherical };

inline const char* to_string(NormFamily f) {
    switch (f) {
    case NormFamily::euclidean: return "euclidean";
    case NormFamily::p_norm: return "p_norm";
    case NormFamily::weighted_euclidean: return "weighted_euclidean";
    case NormFamily::perturbed_spherical: return "perturbed_spherical";
    }
    return "unknown";
}

/**
 * @brief A norm on R^dim drawn from a named parametric family.
 *
 * Families:
 * - euclidean
 * - p_norm(p), 1 <= p <= inf
 * - weighted_euclidean(w), sqrt(sum w_i x_i^2) with w_i > 0
 * - perturbed_spherical(factor, n), the factor-th norm of the spherical
 *   counterexample on R^3
 */
class NormSpec {
public:
    static NormSpec euclidean(int dim) {
        check_dim(dim);
        NormSpec s;
        s.family_ = NormFamily::euclidean;
        s.dim_ = dim;
        return s;
    }

    static NormSpec p_norm(int dim, double p) {
        check_dim(dim);
        if (!(p >= 1.0)) throw InvalidSpec("p_norm: p must satisfy p >= 1");
        NormSpec s;
        s.family_ = NormFamily::p_norm;
        s.dim_ = dim;
        s.p_ = p;
        return s;
    }

    static NormSpec weighted_euclidean(std::vector<double> weights) {
        if (weights.empty()) throw InvalidSpec("weighted_euclidean: no weights");
        for (double w : weights)
            if (!(w > 0.0) || !std::isfinite(w))
                throw InvalidSpec("weighted_euclidean: weights must be finite and > 0");
        NormSpec s;
        s.family_ = NormFamily::weighted_euclidean;
        s.dim_ = static_cast<int>(weights.size());
        s.weights_ = std::move(weights);
        return s;
    }

    static NormSpec perturbed_spherical(int factor, long long n) {
        if (factor != 1 && factor != 2)
            throw InvalidSpec("perturbed_spherical: factor must be 1 or 2");
        if (n < 1) throw InvalidSpec("perturbed_spherical: n must be >= 1");
        NormSpec s;
        s.family_ = NormFamily::perturbed_spherical;
        s.dim_ = 3;
        s.factor_ = factor;
        s.n_ = n;
        return s;
    }

    NormFamily family() const noexcept { return family_; }
    int dim() const noexcept { return dim_; }
    double p() const noexcept { return p_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    int factor() const noexcept { return factor_; }
    long long n() const noexcept { return n_; }

    double operator()(const Vector& v) const;

    std::string describe() const {
        std::ostringstream os;
        os << to_string(family_) << "(dim=" << dim_;
        switch (family_) {
        case NormFamily::p_norm: os << ", p=" << p_; break;
        case NormFamily::weighted_euclidean:
            os << ", w=[";
            for (std::size_t i = 0; i < weights_.size(); ++i) os << (i ? "," : "") << weights_[i];
            os << "]";
            break;
        case NormFamily::perturbed_spherical: os << ", factor=" << factor_ << ", n=" << n_; break;
        default: break;
        }
        os << ")";
        return os.str();
    }

    friend bool operator==(const NormSpec&, const NormSpec&) = default;

private:
    static void check_dim(int dim) {
        if (dim < 1) throw InvalidSpec("norm dimension must be positive");
    }

    NormFamily family_ = NormFamily::euclidean;
    int dim_ = 1;
    double p_ = 2.0;
    std::vector<double> weights_;
    int factor_ = 1;
    long long n_ = 1;
};

namespace detail {

/// (sum |x_i|^p)^(1/p) with the largest entry factored out.
inline double scaled_p_sum(const Vector& v, double p) {
    const double m = v.cwiseAbs().maxCoeff();
    if (m == 0.0) return 0.0;
    if (std::isinf(p)) return m;
    if (p == 1.0) return v.cwiseAbs().sum();
    double s = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) s += std::pow(std::abs(v[i]) / m, p);
    return m * std::pow(s, 1.0 / p);
}

} // namespace detail

/**
 * Evaluates the norm at v.
 *
 * The zero vector maps to exactly 0 without direction normalization.
 *
 * @throws DimensionMismatch if v does not live in R^spec.dim()
 * @throws NonFiniteInput if a coordinate is inf or NaN
 */
inline double norm_eval(const NormSpec& spec, const Vector& v) {
    require_dim(v, spec.dim(), "norm_eval");
    require_finite(v, "norm_eval");
    switch (spec.family()) {
    case NormFamily::euclidean: return v.norm();
    case NormFamily::p_norm:
        if (spec.p() == 2.0) return v.norm();
        return detail::scaled_p_sum(v, spec.p());
    case NormFamily::weighted_euclidean: {
        double s = 0.0;
        for (Eigen::Index i = 0; i < v.size(); ++i)
            s += spec.weights()[static_cast<std::size_t>(i)] * v[i] * v[i];
        return std::sqrt(s);
    }
    case NormFamily::perturbed_spherical:
        return counterexample::SphericalPerturbation{spec.n()}.norm(spec.factor(), v);
    }
    return 0.0;
}

inline double NormSpec::operator()(const Vector& v) const { return norm_eval(*this, v); }

} // namespace mvrank

#endif
