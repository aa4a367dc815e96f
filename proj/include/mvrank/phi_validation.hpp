#ifndef MVRANK_PHI_VALIDATION_HPP
#define MVRANK_PHI_VALIDATION_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "mvrank/norm_checks.hpp"
#include "mvrank/phi.hpp"
#include "mvrank/random.hpp"

/**
 * @file phi_validation.hpp
 *
 * Sampled validators for the conditions a combination functional Phi must
 * satisfy:
 *
 *  (A) = (1)  Phi >= 0 and Phi(q) = 0 iff q = 0
 *  (B)        q^j <= q^k + q^l componentwise  =>  Phi(q^j) <= Phi(q^k) + Phi(q^l)
 *  (2)        q <= p  =>  Phi(q) <= Phi(p)
 *  (3)        Phi(p + q) <= Phi(p) + Phi(q)
 *  (4)        Phi(lambda q) = lambda Phi(q), lambda >= 0
 *  (5)        Phi^2(sum lambda_i e_i) = sum Phi^2(lambda_i e_i), lambda_i > 0
 *
 * (A),(B) make d_Phi a metric; (1)-(4) make Psi a norm; (5) on top makes Psi
 * an inner-product norm. Each failed condition carries the full inputs of its
 * first violating sample, so failures replay from the report alone.
 */

namespace mvrank {

enum class ConditionStatus { not_checked, pass, fail };

inline const char* to_string(ConditionStatus s) {
    switch (s) {
    case ConditionStatus::pass: return "pass";
    case ConditionStatus::fail: return "fail";
    case ConditionStatus::not_checked: return "not_checked";
    }
    return "unknown";
}

enum class Condition { A, B, c1, c2, c3, c4, c5 };

inline constexpr std::array<Condition, 7> all_conditions = {
    Condition::A, Condition::B, Condition::c1, Condition::c2,
    Condition::c3, Condition::c4, Condition::c5};

inline const char* to_string(Condition c) {
    switch (c) {
    case Condition::A: return "A";
    case Condition::B: return "B";
    case Condition::c1: return "1";
    case Condition::c2: return "2";
    case Condition::c3: return "3";
    case Condition::c4: return "4";
    case Condition::c5: return "5";
    }
    return "?";
}

struct ConditionOutcome {
    ConditionStatus status = ConditionStatus::not_checked;
    double worst_violation = 0.0;
    std::size_t samples = 0;
    /// Quadrant points of the first violation, in condition-specific order:
    ///  A/1: {q};  B: {q^j, q^k, q^l};  2: {p, p + lambda e_i};  3: {p, q};
    ///  4: {q} with scalars {lambda};  5: {lambda}.
    std::vector<Vector> witness;
    std::vector<double> witness_scalars;

    bool passed() const noexcept { return status == ConditionStatus::pass; }
    bool failed() const noexcept { return status == ConditionStatus::fail; }
};

struct PhiValidationReport {
    PhiSpec phi = PhiSpec::l1_combination(1);
    std::array<ConditionOutcome, 7> outcomes{};

    const ConditionOutcome& operator[](Condition c) const {
        return outcomes[static_cast<std::size_t>(c)];
    }
    ConditionOutcome& operator[](Condition c) { return outcomes[static_cast<std::size_t>(c)]; }

    bool norm_conditions_pass() const {
        return (*this)[Condition::c1].passed() && (*this)[Condition::c2].passed() &&
               (*this)[Condition::c3].passed() && (*this)[Condition::c4].passed();
    }

    double worst_violation() const {
        double w = 0.0;
        for (const auto& o : outcomes) w = std::max(w, o.worst_violation);
        return w;
    }

    /// e.g. "p_combination(arity=2, p=2) A=pass B=pass 1=pass ... 5=pass"
    std::string summary_line() const {
        std::string s = phi.describe();
        for (Condition c : all_conditions)
            s += std::string(" ") + to_string(c) + "=" + to_string((*this)[c].status);
        return s;
    }
};

struct PhiSampler {
    std::size_t sample_count = 100000;
    std::uint64_t seed = default_seed;
    double tol = 1e-9;
};

namespace detail {

/// Quadrant sample with a random overall scale; each component is zeroed
/// with probability 1/5 to exercise the faces of Q^n. Never the origin.
inline Vector quadrant_sample(Rng& rng, int n) {
    const double scale = log_uniform(rng, 1e-2, 1e2);
    for (;;) {
        Vector q(n);
        for (int i = 0; i < n; ++i)
            q[i] = (uniform(rng, 0.0, 1.0) < 0.2) ? 0.0 : scale * uniform(rng, 0.0, 1.0);
        if (q.maxCoeff() > 0.0) return q;
    }
}

/// Deterministic probes: all-ones, the axes and two-axis sums.
inline std::vector<Vector> quadrant_probes(int n) {
    std::vector<Vector> out;
    out.push_back(Vector::Ones(n));
    for (int i = 0; i < n; ++i) out.push_back(unit_vector(n, i));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) out.push_back(unit_vector(n, i) + 2.0 * unit_vector(n, j));
    return out;
}

inline double rel(double excess, double scale) {
    return std::max(0.0, excess) / std::max(scale, std::numeric_limits<double>::min());
}

struct Recorder {
    ConditionOutcome& out;
    double tol;
    void operator()(double violation, std::vector<Vector> witness, std::vector<double> scalars = {}) {
        ++out.samples;
        out.worst_violation = std::max(out.worst_violation, violation);
        if (violation > tol && out.status != ConditionStatus::fail) {
            out.status = ConditionStatus::fail;
            out.witness = std::move(witness);
            out.witness_scalars = std::move(scalars);
        }
    }
    void finish() {
        if (out.status != ConditionStatus::fail) out.status = ConditionStatus::pass;
    }
};

inline bool dominated(const Vector& a, const Vector& b, const Vector& c) {
    return ((b + c) - a).minCoeff() >= 0.0;
}

} // namespace detail

/**
 * Condition (A): Phi(0) = 0, Phi >= 0, and Phi(q) > 0 for q != 0.
 * A value Phi(q) <= tol * |q|_e at q != 0 counts as vanishing.
 */
inline ConditionOutcome validate_condition_A(const PhiSpec& phi, const PhiSampler& s = {}) {
    const int n = phi.arity();
    ConditionOutcome out;
    detail::Recorder rec{out, s.tol};
    const Vector zero = Vector::Zero(n);
    const double at0 = phi_eval(phi, zero);
    rec(at0 == 0.0 ? 0.0 : std::max(1.0, std::abs(at0)), {zero});

    auto probe = [&](const Vector& q) {
        const double v = phi_eval(phi, q);
        const double ratio = v / q.norm();
        rec(v < 0.0 ? 1.0 : (ratio <= s.tol ? 1.0 : 0.0), {q});
    };
    for (const Vector& q : detail::quadrant_probes(n)) probe(q);
    Rng rng = substream(s.seed, 10);
    for (std::size_t i = 0; i < s.sample_count; ++i) probe(detail::quadrant_sample(rng, n));
    rec.finish();
    return out;
}

/**
 * Condition (B) on triples drawn with the domination pattern: q^k and q^l are
 * sampled, q^j = u (.) (q^k + q^l) with u uniform in [0,1]^n, and every role
 * assignment of the triple whose domination holds is checked. For arity <= 2
 * an exhaustive pass over the lattice {1..20}^n scaled to [0.05, 1] follows.
 *
 * Triples containing the zero vector are not drawn; condition (A) covers the
 * origin.
 */
inline ConditionOutcome validate_condition_B(const PhiSpec& phi, const PhiSampler& s = {}) {
    const int n = phi.arity();
    ConditionOutcome out;
    detail::Recorder rec{out, s.tol};

    auto check_triple = [&](const std::array<Vector, 3>& t) {
        std::array<double, 3> f{phi_eval(phi, t[0]), phi_eval(phi, t[1]), phi_eval(phi, t[2])};
        for (int j = 0; j < 3; ++j) {
            const int k = (j + 1) % 3, l = (j + 2) % 3;
            if (!detail::dominated(t[j], t[k], t[l])) continue;
            rec(detail::rel(f[j] - f[k] - f[l], f[k] + f[l]), {t[j], t[k], t[l]});
        }
    };

    const auto probes = detail::quadrant_probes(n);
    for (const Vector& p : probes) check_triple({Vector(2.0 * p), p, p});
    for (std::size_t i = 0; i + 1 < probes.size(); ++i)
        check_triple({Vector(probes[i] + probes[i + 1]), probes[i], probes[i + 1]});

    Rng rng = substream(s.seed, 11);
    for (std::size_t i = 0; i < s.sample_count; ++i) {
        const Vector qk = detail::quadrant_sample(rng, n);
        const Vector ql = detail::quadrant_sample(rng, n);
        Vector u(n);
        for (int c = 0; c < n; ++c) u[c] = uniform(rng, 0.0, 1.0);
        Vector qj = u.cwiseProduct(qk + ql);
        if (qj.maxCoeff() == 0.0) continue;
        check_triple({qj, qk, ql});
    }

    if (n <= 2) {
        // For each (q^k, q^l) only the dominated q^j maximizing Phi matters:
        // a running maximum over the lower-left lattice rectangle finds it.
        constexpr int side = 20;
        constexpr double h = 1.0 / side;
        const int ny = (n == 2) ? side : 1;
        auto point = [&](int i, int j) {
            Vector q(n);
            q[0] = (i + 1) * h;
            if (n == 2) q[1] = (j + 1) * h;
            return q;
        };
        std::vector<double> f(static_cast<std::size_t>(side * ny));
        std::vector<std::pair<int, int>> arg(f.size());
        std::vector<double> best(f.size());
        for (int i = 0; i < side; ++i)
            for (int j = 0; j < ny; ++j) f[static_cast<std::size_t>(i * ny + j)] = phi_eval(phi, point(i, j));
        for (int i = 0; i < side; ++i)
            for (int j = 0; j < ny; ++j) {
                const std::size_t idx = static_cast<std::size_t>(i * ny + j);
                best[idx] = f[idx];
                arg[idx] = {i, j};
                auto take = [&](std::size_t other) {
                    if (best[other] > best[idx]) {
                        best[idx] = best[other];
                        arg[idx] = arg[other];
                    }
                };
                if (i > 0) take(static_cast<std::size_t>((i - 1) * ny + j));
                if (j > 0) take(static_cast<std::size_t>(i * ny + j - 1));
            }
        for (int ki = 0; ki < side; ++ki)
            for (int kj = 0; kj < ny; ++kj)
                for (int li = 0; li < side; ++li)
                    for (int lj = 0; lj < ny; ++lj) {
                        // lattice index of the componentwise sum, clipped
                        const int si = std::min(side - 1, ki + li + 1);
                        const int sj = (n == 2) ? std::min(side - 1, kj + lj + 1) : 0;
                        const std::size_t top = static_cast<std::size_t>(si * ny + sj);
                        const double fk = f[static_cast<std::size_t>(ki * ny + kj)];
                        const double fl = f[static_cast<std::size_t>(li * ny + lj)];
                        const auto [ji, jj] = arg[top];
                        rec(detail::rel(best[top] - fk - fl, fk + fl),
                            {point(ji, jj), point(ki, kj), point(li, lj)});
                    }
    }
    rec.finish();
    return out;
}

struct NormConditionOutcomes {
    ConditionOutcome definiteness;    // (1)
    ConditionOutcome monotonicity;    // (2)
    ConditionOutcome subadditivity;   // (3)
    ConditionOutcome homogeneity;     // (4)
};

/// Conditions (1)-(4), each on s.sample_count samples after the probes.
inline NormConditionOutcomes validate_conditions_1_to_4(const PhiSpec& phi, const PhiSampler& s = {}) {
    const int n = phi.arity();
    NormConditionOutcomes res;
    res.definiteness = validate_condition_A(phi, s);

    {
        detail::Recorder rec{res.monotonicity, s.tol};
        auto test = [&](const Vector& p, int i, double lambda) {
            Vector pl = p;
            pl[i] += lambda;
            const double a = phi_eval(phi, p), b = phi_eval(phi, pl);
            rec(detail::rel(a - b, std::max(a, b)), {p, pl}, {static_cast<double>(i), lambda});
        };
        const auto probes = detail::quadrant_probes(n);
        for (const Vector& p : probes)
            for (int i = 0; i < n; ++i) test(p, i, 1.0);
        Rng rng = substream(s.seed, 12);
        for (std::size_t k = 0; k < s.sample_count; ++k) {
            const Vector p = detail::quadrant_sample(rng, n);
            test(p, uniform_index(rng, n), log_uniform(rng, 1e-3, 1e2));
        }
        rec.finish();
    }
    {
        detail::Recorder rec{res.subadditivity, s.tol};
        auto test = [&](const Vector& p, const Vector& q) {
            const double a = phi_eval(phi, Vector(p + q));
            const double b = phi_eval(phi, p) + phi_eval(phi, q);
            rec(detail::rel(a - b, std::max(a, b)), {p, q});
        };
        const auto probes = detail::quadrant_probes(n);
        for (const Vector& p : probes) test(p, p);
        for (std::size_t i = 0; i + 1 < probes.size(); ++i) test(probes[i], probes[i + 1]);
        Rng rng = substream(s.seed, 13);
        for (std::size_t k = 0; k < s.sample_count; ++k)
            test(detail::quadrant_sample(rng, n), detail::quadrant_sample(rng, n));
        rec.finish();
    }
    {
        detail::Recorder rec{res.homogeneity, s.tol};
        auto test = [&](const Vector& q, double lambda) {
            const double a = phi_eval(phi, Vector(lambda * q));
            const double b = lambda * phi_eval(phi, q);
            const double scale = std::max({std::abs(a), std::abs(b), std::numeric_limits<double>::min()});
            const double v = (a == b) ? 0.0 : std::abs(a - b) / scale;
            rec(v, {q}, {lambda});
        };
        for (const Vector& q : detail::quadrant_probes(n))
            for (double lambda : {4.0, 0.5, 2.0, 0.0}) test(q, lambda);
        Rng rng = substream(s.seed, 14);
        for (std::size_t k = 0; k < s.sample_count; ++k)
            test(detail::quadrant_sample(rng, n), log_uniform(rng, 1e-3, 1e3));
        rec.finish();
    }
    return res;
}

/// Condition (5), relative to the right-hand side sum of squares.
inline ConditionOutcome validate_condition_5(const PhiSpec& phi, const PhiSampler& s = {}) {
    const int n = phi.arity();
    ConditionOutcome out;
    detail::Recorder rec{out, s.tol};
    auto test = [&](const Vector& lambda) {
        const double lhs = std::pow(phi_eval(phi, lambda), 2);
        double rhs = 0.0;
        for (int i = 0; i < n; ++i) rhs += std::pow(phi_eval(phi, Vector(lambda[i] * unit_vector(n, i))), 2);
        const double scale = std::max({lhs, rhs, std::numeric_limits<double>::min()});
        rec(std::abs(lhs - rhs) / scale, {lambda});
    };
    test(Vector::Ones(n));
    Rng rng = substream(s.seed, 15);
    for (std::size_t k = 0; k < s.sample_count; ++k) {
        const double scale = log_uniform(rng, 1e-2, 1e2);
        Vector lambda(n);
        for (int i = 0; i < n; ++i) lambda[i] = scale * uniform(rng, 1e-3, 1.0);
        test(lambda);
    }
    rec.finish();
    return out;
}

/// Runs every validator. Condition (5) is only checked when (1)-(4) pass.
inline PhiValidationReport validate_phi(const PhiSpec& phi, const PhiSampler& s = {}) {
    PhiValidationReport rep;
    rep.phi = phi;
    rep[Condition::A] = validate_condition_A(phi, s);
    rep[Condition::B] = validate_condition_B(phi, s);
    auto c14 = validate_conditions_1_to_4(phi, s);
    rep[Condition::c1] = std::move(c14.definiteness);
    rep[Condition::c2] = std::move(c14.monotonicity);
    rep[Condition::c3] = std::move(c14.subadditivity);
    rep[Condition::c4] = std::move(c14.homogeneity);
    if (rep.norm_conditions_pass()) rep[Condition::c5] = validate_condition_5(phi, s);
    return rep;
}

/// Strict convexity of the unit ball of Psi.
inline ConvexityResult check_psi_strict_convexity(const PhiSpec& phi, const SamplingOptions& opts = {}) {
    return check_strict_convexity(psi_from_phi(phi), opts);
}

/**
 * Given a monotonicity witness Phi(p + lambda e_i) < Phi(p), returns a pair
 * (x, y) of vectors of R^n with Psi(x + y) > Psi(x) + Psi(y) for homogeneous
 * Phi: p lies on the segment between the reflection q of p + lambda e_i in the
 * i-th coordinate hyperplane and p + lambda e_i itself, and x, y are the two
 * weighted endpoints, x + y = p.
 */
inline std::pair<Vector, Vector> reflected_subadditivity_witness(const Vector& p, int i, double lambda) {
    Vector top = p;
    top[i] += lambda;
    Vector q = top;
    q[i] = -(p[i] + lambda);
    const double s = lambda / (2.0 * (p[i] + lambda));
    return {s * q, (1.0 - s) * top};
}

} // namespace mvrank

#endif
