#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "../support/instances.hpp"
#include "bolza/lagrangian.hpp"
#include "bolza/qualification.hpp"
#include "bolza/solver.hpp"

using namespace bolza;
using bolza::testing::interval;
using bolza::testing::scalarProblem;
using bolza::testing::withSets;

TEST(CheckCQ, Examples) {
    EXPECT_EQ(checkCQ(scalarProblem(0, 1, 0, 0, 1).stage(0)).verdict, Verdict::Holds);

    QualificationReport fails = checkCQ(scalarProblem(0, 0, 0, 0, 0).stage(0));
    EXPECT_EQ(fails.verdict, Verdict::Fails);
    ASSERT_EQ(fails.witness.size(), 1u);
    EXPECT_GT(infNorm(fails.witness[0]), 0.5);

    auto boxed = withSets(scalarProblem(0, 0, 0, 0, 0), ConvexSet::wholeSpace(1), interval(-1, 1));
    EXPECT_EQ(checkCQ(boxed.stage(0)).verdict, Verdict::Holds);
}

TEST(CheckCQ, HalfLineRecessionFails) {
    auto prob = withSets(scalarProblem(0, 0, 0, 0, 0), ConvexSet::wholeSpace(1), interval(0, INFINITY));
    EXPECT_EQ(checkCQ(prob.stage(0)).verdict, Verdict::Fails);
}

TEST(CheckCQ, HoldsImpliesAttainedInnerInfimum) {
    // B = [1 0], R = diag(0, 1): kernels meet in {0}.
    Matrix B(1, 2), R = Matrix::Zero(2, 2);
    B << 1, 0;
    R(1, 1) = 1;
    StageSpec s = makeStage(scalarMatrix(0.2), B, vec({0}), scalarMatrix(0), R);
    s.controlSet = ConvexSet::box(vec({-2, -INFINITY}), vec({2, INFINITY}));
    BolzaProblem prob({s}, makeTerminal(scalarMatrix(1)));
    ASSERT_EQ(checkCQ(prob.stage(0)).verdict, Verdict::Holds);
    PrimalModel model(prob);
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> d(-3, 3);
    for (int k = 0; k < 200; ++k) {
        const Vector x = vec({d(rng)}), v = vec({d(rng)});
        auto lv = lagrangianEval(model, 0, x, v);
        if (lv.value.isInfinite()) continue;
        EXPECT_LE(std::abs((B * lv.control)(0) - (v(0) - 0.2 * x(0))), 1e-8);
    }
}

TEST(EqSys, FreeSetsGiveZeroWitness) {
    EqSysResult r = solveEqSys(scalarProblem(0, 1, 0, 0, 1));
    ASSERT_TRUE(r.feasible);
    EXPECT_GT(r.slack, 1e-7);
    for (const auto& x : r.states) EXPECT_NEAR(x(0), 0.0, 1e-6);
    QualificationReport h = checkH(scalarProblem(0, 1, 0, 0, 1));
    EXPECT_EQ(h.verdict, Verdict::Holds);
    EXPECT_EQ(h.witness.size(), 2u);
}

TEST(EqSys, UnreachableTerminalSet) {
    // x_1 = (1 + A) x_0 + phi = 1, but dom g = [2, 3].
    auto base = scalarProblem(-1, 0, 1, 0, 0, 0);
    BolzaProblem prob(base.stages(), TerminalCost{scalarMatrix(0), interval(2, 3)});
    EXPECT_FALSE(solveEqSys(prob).feasible);
    QualificationReport h = checkH(prob);
    EXPECT_EQ(h.verdict, Verdict::Fails);
    EXPECT_EQ(h.reasonCode, "eq-sys-infeasible");
}

TEST(EqSys, EquilibriumPoint) {
    // A = -1, B = 1: x_{t+1} = u_t, any interior pair works.
    auto prob = withSets(scalarProblem(-1, 1, 0, 0, 1), interval(-1, 1), interval(-1, 1));
    QualificationReport h = checkH(prob);
    EXPECT_EQ(h.verdict, Verdict::Holds);
    ASSERT_EQ(h.witnessControls.size(), 1u);
    EXPECT_NEAR(h.witness[1](0), h.witnessControls[0](0), 1e-8);
    EXPECT_LT(std::abs(h.witness[0](0)), 1.0);
}

TEST(EqSys, TouchingSetsHaveNoStrictWitness) {
    // X_0 = [0, 1], x_1 = x_0 + 1 must lie in [2, 3]: only x_0 = 1 works.
    auto base = withSets(scalarProblem(0, 0, 1, 0, 0, 0), interval(0, 1), ConvexSet::wholeSpace(1));
    BolzaProblem prob(base.stages(), TerminalCost{scalarMatrix(0), interval(2, 3)});
    EqSysResult r = solveEqSys(prob);
    EXPECT_TRUE(r.feasible);
    EXPECT_LE(r.slack, 1e-7);
    EXPECT_EQ(checkH(prob).verdict, Verdict::Fails);
}

TEST(EqSys, MixedSlaterMargin) {
    auto lq = withSets(scalarProblem(0, 1, 0, 0, 1), interval(-1, 1), interval(-1, 1));
    auto stages = lq.stages();
    // x + u <= -1.5 leaves room only near x = u = -1.
    stages[0].mixed = MixedConstraintSpec{MixedFunction::quadratic(Matrix::Zero(2, 2), vec({1, 1}), 1.5), std::nullopt};
    EqSysResult r = solveEqSys(BolzaProblem(stages, lq.terminal()));
    ASSERT_TRUE(r.feasible);
    EXPECT_NEAR(r.slack, 1.0 / 6.0, 1e-6);
    EXPECT_LE(r.states[0](0) + r.controls[0](0) + 1.5, -1.0 / 6.0 + 1e-6);
}

TEST(EqSys, HoldsImpliesPrimalFeasibleFromWitness) {
    Matrix A(2, 2), B(2, 1);
    A << 0, 1, -0.5, 0;
    B << 0, 1;
    StageSpec s = makeStage(A, B, vec({0, 0.1}), Matrix::Zero(2, 2), scalarMatrix(1));
    s.stateSet = ConvexSet::box(vec({-2, -2}), vec({2, 2}));
    s.controlSet = interval(-1, 1);
    BolzaProblem prob = bolza::testing::repeatedProblem(s, 3, makeTerminal(Matrix::Identity(2, 2)));
    QualificationReport h = checkH(prob);
    ASSERT_EQ(h.verdict, Verdict::Holds);
    EXPECT_TRUE(solvePrimal(prob, 0, h.witness[0]).optimal());
}

TEST(CheckHprime, Examples) {
    QualificationReport i = checkHprime(scalarProblem(0.5, 1, 0, 1, 0));
    EXPECT_EQ(i.verdict, Verdict::Holds);
    EXPECT_EQ(i.reasonCode, "i");

    QualificationReport ii = checkHprime(scalarProblem(0, 1, 0, 0, 1));
    EXPECT_EQ(ii.verdict, Verdict::Holds);
    EXPECT_EQ(ii.reasonCode, "ii");

    QualificationReport iii = checkHprime(scalarProblem(0, 1, 0, 0, 0));
    EXPECT_EQ(iii.verdict, Verdict::Holds);
    EXPECT_EQ(iii.reasonCode, "iii");
    ASSERT_EQ(iii.witness.size(), 2u);
    EXPECT_EQ(iii.witness[0](0), 0.0);
}

TEST(CheckHprime, RankDeficientIsUndecided) {
    // A = -1 makes A' + I singular, and Q = 0 on a half line is neither case.
    auto prob = withSets(scalarProblem(-1, 1, 0, 0, 1), interval(0, INFINITY), ConvexSet::wholeSpace(1));
    QualificationReport r = checkHprime(prob);
    EXPECT_EQ(r.verdict, Verdict::Undecided);
    EXPECT_EQ(r.stageReasons[0], "none");
}

TEST(CheckHprime, CompactSetsCount) {
    auto prob = withSets(scalarProblem(-1, 1, 0, 0, 0), interval(-1, 1), ConvexSet::wholeSpace(1));
    EXPECT_EQ(checkHprime(prob).reasonCode, "i");
}

TEST(MixedCertificates, BoundedControls) {
    auto lq = scalarProblem(0, 1, 0, 0, 1);
    auto stages = lq.stages();
    Matrix P = Matrix::Zero(2, 2);
    P(1, 1) = 2;
    stages[0].mixed = MixedConstraintSpec{MixedFunction::quadratic(P, Vector::Zero(2), -1), std::nullopt};
    CertificateInput certs;
    certs.psi = {[](const Vector&) { return 1.0; }};
    certs.budget = 5000;
    auto reports = checkMixedCertificates(BolzaProblem(stages, lq.terminal()), certs);
    EXPECT_EQ(reports[0].verdict, Verdict::Undecided);
    EXPECT_EQ(reports[0].reasonCode, "no-counterexample-in-budget");
    EXPECT_EQ(reports[1].reasonCode, "no-certificate");
}

TEST(MixedCertificates, UnboundedControlsGiveCounterexample) {
    auto lq = scalarProblem(0, 1, 0, 0, 1);
    auto stages = lq.stages();
    stages[0].mixed = MixedConstraintSpec{MixedFunction::quadratic(Matrix::Zero(2, 2), Vector::Zero(2), -1), std::nullopt};
    CertificateInput certs;
    certs.psi = {[](const Vector&) { return 1.0; }};
    auto reports = checkMixedCertificates(BolzaProblem(stages, lq.terminal()), certs);
    ASSERT_EQ(reports[0].verdict, Verdict::Fails);
    ASSERT_TRUE(reports[0].counterexample.has_value());
    EXPECT_GT(std::abs((*reports[0].counterexample)[2](0)), 1.0);
}

TEST(MixedCertificates, CoerciveRunningCost) {
    auto lq = scalarProblem(0, 1, 0, 0, 1);
    auto stages = lq.stages();
    stages[0].mixed = MixedConstraintSpec{
        std::nullopt, MixedFunction::callable(2, [](const Vector& z) { return z(1) * z(1) + std::abs(z(0)); })};
    CertificateInput certs;
    certs.kappa0 = 1.0;
    certs.h = {[&](const Vector& z) { return certs.kappa0 + z.squaredNorm() / 4.0; }};
    auto reports = checkMixedCertificates(BolzaProblem(stages, lq.terminal()), certs);
    EXPECT_EQ(reports[1].verdict, Verdict::Undecided);
    EXPECT_FALSE(reports[1].counterexample.has_value());
    // A bound that is too small is caught.
    certs.h = {[](const Vector&) { return 0.1; }};
    EXPECT_EQ(checkMixedCertificates(BolzaProblem(stages, lq.terminal()), certs)[1].verdict, Verdict::Fails);
}

TEST(RelativeInterior, Examples) {
    EXPECT_TRUE(relativeInteriorMembership(interval(0, 1), vec({0.5})));
    EXPECT_FALSE(relativeInteriorMembership(interval(0, 1), vec({0})));
    EXPECT_TRUE(relativeInteriorMembership(interval(2, 2), vec({2})));
}

TEST(RelativeInterior, AgreesWithBallTestOnRandomPolygons) {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> d(-1, 1);
    for (int trial = 0; trial < 10; ++trial) {
        Matrix C(5, 2);
        Vector rhs(5);
        for (int i = 0; i < 5; ++i) {
            const double a = 2 * M_PI * i / 5 + 0.3 * d(rng);
            C(i, 0) = std::cos(a);
            C(i, 1) = std::sin(a);
            rhs(i) = 0.5 + 0.4 * std::abs(d(rng));
        }
        ConvexSet P = ConvexSet::polyhedron(C, rhs);
        for (int k = 0; k < 20; ++k) {
            const Vector z = vec({d(rng), d(rng)});
            // Full-dimensional polygon: ri is the interior, i.e. a small ball fits.
            bool ball = true;
            for (int j = 0; j < 16 && ball; ++j) {
                const double a = 2 * M_PI * j / 16;
                ball = P.contains(z + 1e-4 * vec({std::cos(a), std::sin(a)}), 0.0);
            }
            const double minSlack = (rhs - C * z).minCoeff();
            if (std::abs(minSlack) < 1e-3) continue;
            EXPECT_EQ(relativeInteriorMembership(P, z), ball) << z.transpose();
        }
    }
}
