#include <cmath>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include "mvrank.hpp"
#include "property.hpp"

using namespace mvrank;
using mvrank::testing::for_all;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

PhiSampler sampler(std::size_t n = 20000) { return PhiSampler{n, 42, 1e-9}; }

bool is_homogeneous_family(const PhiSpec& p) {
    switch (p.family()) {
    case PhiFamily::p_combination:
    case PhiFamily::weighted_euclidean:
    case PhiFamily::max_combination:
    case PhiFamily::l1_combination:
    case PhiFamily::abs_difference: return true;
    default: return false;
    }
}

} // namespace

TEST(PhiEval, Examples) {
    EXPECT_DOUBLE_EQ(phi_eval(PhiSpec::p_combination(2, 2.0), make_vector({3, 4})), 5.0);
    EXPECT_DOUBLE_EQ(phi_eval(PhiSpec::max_combination(2), make_vector({1, 7})), 7.0);
    EXPECT_DOUBLE_EQ(phi_eval(PhiSpec::l1_combination(3), make_vector({1, 2, 3})), 6.0);
    EXPECT_DOUBLE_EQ(phi_eval(PhiSpec::p_combination(2, inf), make_vector({2, 5})), 5.0);
    EXPECT_DOUBLE_EQ(phi_eval(PhiSpec::square_first(), make_vector({3})), 9.0);
    EXPECT_DOUBLE_EQ(phi_eval(PhiSpec::sqrt_first(), make_vector({9})), 3.0);
    EXPECT_DOUBLE_EQ(phi_eval(PhiSpec::abs_difference(), make_vector({1, 4})), 3.0);
    EXPECT_DOUBLE_EQ(phi_eval(PhiSpec::constant(2, 1.0), make_vector({0, 0})), 1.0);
}

TEST(PhiEval, RejectsNegativeComponent) {
    EXPECT_THROW(phi_eval(PhiSpec::p_combination(2, 2.0), make_vector({-1, 0})), DomainError);
}

TEST(PhiEval, RejectsArityMismatch) {
    EXPECT_THROW(phi_eval(PhiSpec::p_combination(2, 2.0), make_vector({1, 2, 3})), DimensionMismatch);
}

TEST(PhiEval, RejectsNonFinite) {
    EXPECT_THROW(phi_eval(PhiSpec::l1_combination(2), make_vector({1, inf})), NonFiniteInput);
}

TEST(PhiSpecTest, InvalidParametersThrow) {
    EXPECT_THROW(PhiSpec::p_combination(2, 0.5), InvalidSpec);
    EXPECT_THROW(PhiSpec::p_combination(0, 2.0), InvalidSpec);
    EXPECT_THROW(PhiSpec::weighted_euclidean({1.0, 0.0}), InvalidSpec);
}

TEST(PhiEval, ExactlyHomogeneousUnderPowersOfTwo) {
    for (const PhiSpec& phi : builtin_phi_families(2)) {
        if (!is_homogeneous_family(phi)) continue;
        for_all(7, 200, [](Rng& r) { return mvrank::detail::quadrant_sample(r, 2); }, [&](const Vector& q) {
            const double a = phi_eval(phi, Vector(8.0 * q)), b = 8.0 * phi_eval(phi, q);
            if (a == b) return ::testing::AssertionSuccess();
            return ::testing::AssertionFailure() << phi.describe() << ": " << a << " vs " << b;
        });
    }
}

TEST(PhiEval, HomogeneousAlongRays) {
    for (const PhiSpec& phi : builtin_phi_families(3)) {
        if (!is_homogeneous_family(phi)) continue;
        for_all(8, 200, [](Rng& r) {
            return std::make_pair(mvrank::detail::quadrant_sample(r, 3), log_uniform(r, 1e-3, 1e3));
        }, [&](const auto& c) {
            const double a = phi_eval(phi, Vector(c.second * c.first)), b = c.second * phi_eval(phi, c.first);
            if (std::abs(a - b) <= 1e-15 * std::max(1.0, b) * 4) return ::testing::AssertionSuccess();
            return ::testing::AssertionFailure() << phi.describe() << ": " << a << " vs " << b;
        });
    }
}

TEST(ConditionA, Standard) {
    EXPECT_TRUE(validate_condition_A(PhiSpec::p_combination(2, 2.0), sampler()).passed());
    EXPECT_TRUE(validate_condition_A(PhiSpec::max_combination(2), sampler()).passed());
}

TEST(ConditionA, ConstantFailsAtOrigin) {
    const auto o = validate_condition_A(PhiSpec::constant(2, 1.0), sampler());
    ASSERT_TRUE(o.failed());
    ASSERT_FALSE(o.witness.empty());
    EXPECT_EQ(o.witness[0], Vector::Zero(2));
}

TEST(ConditionB, StandardPasses) {
    EXPECT_TRUE(validate_condition_B(PhiSpec::p_combination(2, 2.0), sampler()).passed());
}

TEST(ConditionB, IndicatorPassesOnNonZeroTriples) {
    EXPECT_TRUE(validate_condition_B(PhiSpec::indicator_split(), sampler()).passed());
}

TEST(ConditionB, IndicatorExhaustiveLatticeOracle) {
    // Independent exhaustive check over the 20 x 20 lattice of non-zero points.
    const PhiSpec phi = PhiSpec::indicator_split();
    std::vector<Vector> pts;
    for (int i = 1; i <= 20; ++i)
        for (int j = 1; j <= 20; ++j) pts.push_back(make_vector({i / 20.0, j / 20.0}));
    int violations = 0;
    for (const Vector& k : pts)
        for (const Vector& l : pts) {
            const Vector top = k + l;
            double worst = 0.0;
            for (const Vector& j : pts)
                if (j[0] <= top[0] && j[1] <= top[1]) worst = std::max(worst, phi_eval(phi, j));
            if (worst > phi_eval(phi, k) + phi_eval(phi, l) + 1e-12) ++violations;
        }
    EXPECT_EQ(violations, 0);
}

TEST(ConditionB, IndicatorWouldFailWithZeroMember) {
    // With q^k = 0 the condition would force monotonicity, which fails.
    const PhiSpec phi = PhiSpec::indicator_split();
    const Vector qj = make_vector({1.0, 0.5}), ql = make_vector({1.0, 1.0});
    EXPECT_TRUE(qj[0] <= ql[0] && qj[1] <= ql[1]);
    EXPECT_GT(phi_eval(phi, qj), phi_eval(phi, Vector::Zero(2)) + phi_eval(phi, ql));
}

TEST(ConditionB, SquareFailsWithReplayableWitness) {
    const PhiSpec phi = PhiSpec::square_first();
    const auto o = validate_condition_B(phi, sampler());
    ASSERT_TRUE(o.failed());
    ASSERT_EQ(o.witness.size(), 3u);
    const Vector& qj = o.witness[0];
    const Vector& qk = o.witness[1];
    const Vector& ql = o.witness[2];
    EXPECT_LE(qj[0], qk[0] + ql[0]);
    EXPECT_GT(phi_eval(phi, qj), phi_eval(phi, qk) + phi_eval(phi, ql));
}

TEST(Conditions1To4, LpFamiliesPass) {
    for (double p : {1.0, 2.0, inf}) {
        const auto c = validate_conditions_1_to_4(PhiSpec::p_combination(2, p), sampler());
        EXPECT_TRUE(c.definiteness.passed() && c.monotonicity.passed() && c.subadditivity.passed() &&
                    c.homogeneity.passed())
            << "p = " << p;
    }
}

TEST(Conditions1To4, SqrtFailsHomogeneityAtFirstProbe) {
    const auto c = validate_conditions_1_to_4(PhiSpec::sqrt_first(), sampler());
    ASSERT_TRUE(c.homogeneity.failed());
    ASSERT_FALSE(c.homogeneity.witness_scalars.empty());
    EXPECT_EQ(c.homogeneity.witness_scalars[0], 4.0);
}

TEST(Conditions1To4, AbsDifferenceFailsDefiniteness) {
    const auto c = validate_conditions_1_to_4(PhiSpec::abs_difference(), sampler());
    ASSERT_TRUE(c.definiteness.failed());
    const Vector& q = c.definiteness.witness[0];
    EXPECT_NE(q, Vector::Zero(2));
    EXPECT_EQ(phi_eval(PhiSpec::abs_difference(), q), 0.0);
}

TEST(Conditions1To4, SquareFailsSubadditivity) {
    const auto c = validate_conditions_1_to_4(PhiSpec::square_first(), sampler());
    ASSERT_TRUE(c.subadditivity.failed());
    const Vector& p = c.subadditivity.witness[0];
    const Vector& q = c.subadditivity.witness[1];
    const PhiSpec phi = PhiSpec::square_first();
    EXPECT_GT(phi_eval(phi, Vector(p + q)), phi_eval(phi, p) + phi_eval(phi, q));
}

TEST(Condition5, EuclideanPasses) {
    EXPECT_TRUE(validate_condition_5(PhiSpec::p_combination(2, 2.0), sampler()).passed());
    EXPECT_TRUE(validate_condition_5(PhiSpec::weighted_euclidean({0.5, 3.0}), sampler()).passed());
}

TEST(Condition5, MaxFailsAtOnes) {
    const auto o = validate_condition_5(PhiSpec::max_combination(2), sampler());
    ASSERT_TRUE(o.failed());
    EXPECT_EQ(o.witness[0], Vector::Ones(2));
}

TEST(Condition5, L1FailsAtOnes) {
    // Phi^2(1, 1) = 4 while Phi^2(1, 0) + Phi^2(0, 1) = 2.
    const auto o = validate_condition_5(PhiSpec::l1_combination(2), sampler());
    ASSERT_TRUE(o.failed());
    EXPECT_EQ(o.witness[0], Vector::Ones(2));
    EXPECT_NEAR(o.worst_violation, 0.5, 1e-12);
}

TEST(ValidatePhi, ReportSkipsFiveWhenNormConditionsFail) {
    const auto r = validate_phi(PhiSpec::sqrt_first(), sampler(2000));
    EXPECT_EQ(r[Condition::c5].status, ConditionStatus::not_checked);
    EXPECT_FALSE(r.norm_conditions_pass());
}

TEST(ValidatePhi, SummaryLineNamesEveryCondition) {
    const auto r = validate_phi(PhiSpec::p_combination(2, 2.0), sampler(2000));
    const std::string s = r.summary_line();
    for (const char* name : {"A", "B", "1", "2", "3", "4", "5"}) EXPECT_NE(s.find(name), std::string::npos) << s;
}

TEST(ValidatePhi, DeterministicUnderSeed) {
    const auto a = validate_phi(PhiSpec::p_combination(2, 3.0), sampler(3000));
    const auto b = validate_phi(PhiSpec::p_combination(2, 3.0), sampler(3000));
    for (Condition c : all_conditions) {
        EXPECT_EQ(a[c].status, b[c].status);
        EXPECT_EQ(a[c].worst_violation, b[c].worst_violation);
    }
}

TEST(PsiFromPhi, Examples) {
    const PsiNorm psi = psi_from_phi(PhiSpec::p_combination(2, 2.0));
    EXPECT_DOUBLE_EQ(psi(make_vector({-3, 4})), 5.0);
    EXPECT_DOUBLE_EQ(psi_from_phi(PhiSpec::max_combination(2))(make_vector({-1, -7})), 7.0);
    EXPECT_EQ(psi.dim(), 2);
}

TEST(PsiFromPhi, NormIffConditions1To4ForBuiltins) {
    for (const PhiSpec& phi : builtin_phi_families(2)) {
        const auto c = validate_conditions_1_to_4(phi, sampler());
        const bool conditions = c.definiteness.passed() && c.monotonicity.passed() && c.subadditivity.passed() &&
                                c.homogeneity.passed();
        const bool norm = check_norm_axioms(psi_from_phi(phi), SamplingOptions{20000, 42, 1e-9}).all_ok();
        EXPECT_EQ(conditions, norm) << phi.describe();
    }
}

TEST(PsiFromPhi, MonotonicityWitnessReflectsToSubadditivityFailure) {
    const PhiSpec phi = PhiSpec::abs_difference();
    const auto c = validate_conditions_1_to_4(phi, sampler());
    ASSERT_TRUE(c.monotonicity.failed());
    const Vector& p = c.monotonicity.witness[0];
    const int i = static_cast<int>(c.monotonicity.witness_scalars[0]);
    const double lambda = c.monotonicity.witness_scalars[1];
    const auto [x, y] = reflected_subadditivity_witness(p, i, lambda);
    EXPECT_LT((x + y - p).cwiseAbs().maxCoeff(), 1e-12 * (1 + p.norm()));
    const PsiNorm psi = psi_from_phi(phi);
    EXPECT_GT(psi(Vector(x + y)), psi(x) + psi(y));
}

TEST(PsiFromPhi, ConditionFiveIffParallelogramUnderNormConditions) {
    int compared = 0;
    for (int arity : {2, 3})
        for (const PhiSpec& phi : builtin_phi_families(arity)) {
            const auto r = validate_phi(phi, sampler(5000));
            if (!r.norm_conditions_pass()) continue;
            ++compared;
            const bool five = r[Condition::c5].passed();
            const bool par = check_parallelogram(psi_from_phi(phi), SamplingOptions{5000, 42, 1e-9}).holds;
            EXPECT_EQ(five, par) << phi.describe();
        }
    EXPECT_GE(compared, 8);
}

TEST(PsiStrictConvexity, Examples) {
    EXPECT_TRUE(check_psi_strict_convexity(PhiSpec::p_combination(2, 2.0)).strictly_convex);
    EXPECT_TRUE(check_psi_strict_convexity(PhiSpec::p_combination(3, 4.0)).strictly_convex);
    EXPECT_FALSE(check_psi_strict_convexity(PhiSpec::max_combination(2)).strictly_convex);
    EXPECT_FALSE(check_psi_strict_convexity(PhiSpec::l1_combination(2)).strictly_convex);
}

TEST(PsiStrictConvexity, L3MidpointsOracle) {
    // Independent oracle: midpoints of distinct points on the l3 sphere lie inside.
    const PsiNorm psi = psi_from_phi(PhiSpec::p_combination(2, 3.0));
    auto on_sphere = [](double a) {
        const double c = std::cos(a), s = std::sin(a);
        const double r = std::cbrt(std::abs(c * c * c) + std::abs(s * s * s));
        return make_vector({c / r, s / r});
    };
    for (int i = 0; i < 64; ++i)
        for (int j = i + 1; j < 64; ++j) {
            const Vector x = on_sphere(2 * std::numbers::pi * i / 64), y = on_sphere(2 * std::numbers::pi * j / 64);
            EXPECT_LT(psi(Vector(0.5 * (x + y))), 1.0 - 1e-6);
        }
    EXPECT_TRUE(check_psi_strict_convexity(PhiSpec::p_combination(2, 3.0)).strictly_convex);
}
