#ifndef MVRANK_PHI_HPP
#define MVRANK_PHI_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mvrank/errors.hpp"
#include "mvrank/vector.hpp"

/**
 * @file phi.hpp
 *
 * Combination functionals Phi : Q^n = [0, inf)^n -> [0, inf) used to build
 * product metrics d_Phi = Phi(d_1, ..., d_n), and the reflected functional
 * Psi(x) = Phi(|x_1|, ..., |x_n|) on R^n.
 */

namespace mvrank {

enum class PhiFamily {
    p_combination,      ///< Lp norm of q, 1 <= p <= inf
    weighted_euclidean, ///< sqrt(sum w_i q_i^2)
    max_combination,    ///< max_i q_i
    l1_combination,     ///< sum_i q_i
    // Diagnostic functionals. Each violates some of the conditions and
    // exists so validators have concrete failure cases to witness.
    constant,        ///< Phi == value everywhere, including at 0
    indicator_split, ///< 0 at 0, else 1.5 + 0.5 sign(q_1 - q_2); arity 2
    square_first,    ///< q_1^2
    sqrt_first,      ///< sqrt(q_1)
    abs_difference,  ///< |q_1 - q_2|; arity 2
};

inline const char* to_string(PhiFamily f) {
    switch (f) {
    case PhiFamily::p_combination: return "p_combination";
    case PhiFamily::weighted_euclidean: return "weighted_euclidean";
    case PhiFamily::max_combination: return "max_combination";
    case PhiFamily::l1_combination: return "l1_combination";
    case PhiFamily::constant: return "constant";
    case PhiFamily::indicator_split: return "indicator_split";
    case PhiFamily::square_first: return "square_first";
    case PhiFamily::sqrt_first: return "sqrt_first";
    case PhiFamily::abs_difference: return "abs_difference";
    }
    return "unknown";
}

class PhiSpec {
public:
    static PhiSpec p_combination(int arity, double p) {
        if (!(p >= 1.0)) throw InvalidSpec("p_combination: p must satisfy p >= 1");
        PhiSpec s = make(PhiFamily::p_combination, arity);
        s.p_ = p;
        return s;
    }
    static PhiSpec weighted_euclidean(std::vector<double> weights) {
        if (weights.empty()) throw InvalidSpec("weighted_euclidean: no weights");
        for (double w : weights)
            if (!(w > 0.0) || !std::isfinite(w))
                throw InvalidSpec("weighted_euclidean: weights must be finite and > 0");
        PhiSpec s = make(PhiFamily::weighted_euclidean, static_cast<int>(weights.size()));
        s.weights_ = std::move(weights);
        return s;
    }
    static PhiSpec max_combination(int arity) { return make(PhiFamily::max_combination, arity); }
    static PhiSpec l1_combination(int arity) { return make(PhiFamily::l1_combination, arity); }
    static PhiSpec constant(int arity, double value) {
        if (!(value >= 0.0) || !std::isfinite(value))
            throw InvalidSpec("constant: value must be finite and >= 0");
        PhiSpec s = make(PhiFamily::constant, arity);
        s.value_ = value;
        return s;
    }
    static PhiSpec indicator_split() { return make(PhiFamily::indicator_split, 2); }
    static PhiSpec square_first(int arity = 1) { return make(PhiFamily::square_first, arity); }
    static PhiSpec sqrt_first(int arity = 1) { return make(PhiFamily::sqrt_first, arity); }
    static PhiSpec abs_difference() { return make(PhiFamily::abs_difference, 2); }

    PhiFamily family() const noexcept { return family_; }
    int arity() const noexcept { return arity_; }
    double p() const noexcept { return p_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    double value() const noexcept { return value_; }

    std::string describe() const {
        std::ostringstream os;
        os << to_string(family_) << "(arity=" << arity_;
        if (family_ == PhiFamily::p_combination) os << ", p=" << p_;
        if (family_ == PhiFamily::constant) os << ", value=" << value_;
        if (family_ == PhiFamily::weighted_euclidean) {
            os << ", w=[";
            for (std::size_t i = 0; i < weights_.size(); ++i) os << (i ? "," : "") << weights_[i];
            os << "]";
        }
        os << ")";
        return os.str();
    }

    friend bool operator==(const PhiSpec&, const PhiSpec&) = default;

private:
    static PhiSpec make(PhiFamily f, int arity) {
        if (arity < 1) throw InvalidSpec("phi arity must be >= 1");
        if ((f == PhiFamily::indicator_split || f == PhiFamily::abs_difference) && arity != 2)
            throw InvalidSpec(std::string(to_string(f)) + " requires arity 2");
        PhiSpec s;
        s.family_ = f;
        s.arity_ = arity;
        return s;
    }

    PhiFamily family_ = PhiFamily::p_combination;
    int arity_ = 1;
    double p_ = 2.0;
    std::vector<double> weights_;
    double value_ = 1.0;
};

/// One instance of every built-in family at the given arity: the
/// product-metric combinations followed by the diagnostic functionals.
inline std::vector<PhiSpec> builtin_phi_families(int arity = 2) {
    std::vector<PhiSpec> out = {
        PhiSpec::p_combination(arity, 1.0),
        PhiSpec::p_combination(arity, 2.0),
        PhiSpec::p_combination(arity, 3.0),
        PhiSpec::p_combination(arity, 4.0),
        PhiSpec::p_combination(arity, std::numeric_limits<double>::infinity()),
        PhiSpec::weighted_euclidean(std::vector<double>(static_cast<std::size_t>(arity), 1.0)),
        PhiSpec::max_combination(arity),
        PhiSpec::l1_combination(arity),
        PhiSpec::constant(arity, 1.0),
        PhiSpec::square_first(arity),
        PhiSpec::sqrt_first(arity),
    };
    if (arity == 2) {
        std::vector<double> w = {0.5, 3.0};
        out.push_back(PhiSpec::weighted_euclidean(w));
        out.push_back(PhiSpec::indicator_split());
        out.push_back(PhiSpec::abs_difference());
    }
    return out;
}

/**
 * Phi(q) for a quadrant point q.
 *
 * @throws DimensionMismatch if q.size() != arity
 * @throws DomainError if a component is negative
 * @throws NonFiniteInput for inf/NaN components
 */
inline double phi_eval(const PhiSpec& phi, std::span<const double> q) {
    if (static_cast<int>(q.size()) != phi.arity())
        throw DimensionMismatch("phi_eval: expected arity " + std::to_string(phi.arity()) +
                                ", got " + std::to_string(q.size()));
    double m = 0.0;
    for (double x : q) {
        if (!std::isfinite(x)) throw NonFiniteInput("phi_eval: non-finite component");
        if (x < 0.0) throw DomainError("phi_eval: negative quadrant component");
        m = std::max(m, x);
    }
    switch (phi.family()) {
    case PhiFamily::p_combination: {
        const double p = phi.p();
        if (m == 0.0) return 0.0;
        if (std::isinf(p)) return m;
        double s = 0.0;
        if (p == 1.0) {
            for (double x : q) s += x;
            return s;
        }
        if (p == 2.0) {
            for (double x : q) s += x * x;
            return std::sqrt(s);
        }
        for (double x : q) s += std::pow(x / m, p);
        return m * std::pow(s, 1.0 / p);
    }
    case PhiFamily::weighted_euclidean: {
        double s = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) s += phi.weights()[i] * q[i] * q[i];
        return std::sqrt(s);
    }
    case PhiFamily::max_combination: return m;
    case PhiFamily::l1_combination: {
        double s = 0.0;
        for (double x : q) s += x;
        return s;
    }
    case PhiFamily::constant: return phi.value();
    case PhiFamily::indicator_split: {
        if (m == 0.0) return 0.0;
        const double d = q[0] - q[1];
        const double sign = (d > 0.0) - (d < 0.0);
        return 1.5 + 0.5 * sign;
    }
    case PhiFamily::square_first: return q[0] * q[0];
    case PhiFamily::sqrt_first: return std::sqrt(q[0]);
    case PhiFamily::abs_difference: return std::abs(q[0] - q[1]);
    }
    return 0.0;
}

inline double phi_eval(const PhiSpec& phi, const Vector& q) {
    return phi_eval(phi, std::span<const double>(q.data(), static_cast<std::size_t>(q.size())));
}

/// Psi(x) = Phi(|x_1|, ..., |x_n|) on R^n.
class PsiNorm {
public:
    explicit PsiNorm(PhiSpec source) : source_(std::move(source)) {}

    const PhiSpec& source() const noexcept { return source_; }
    int dim() const noexcept { return source_.arity(); }

    double operator()(const Vector& x) const {
        require_dim(x, dim(), "PsiNorm");
        return phi_eval(source_, Vector(x.cwiseAbs()));
    }

private:
    PhiSpec source_;
};

inline PsiNorm psi_from_phi(const PhiSpec& phi) { return PsiNorm(phi); }

} // namespace mvrank

#endif
