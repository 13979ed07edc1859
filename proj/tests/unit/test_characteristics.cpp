#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "../support/instances.hpp"
#include "bolza/characteristics.hpp"

using namespace bolza;
using bolza::testing::interval;
using bolza::testing::scalarProblem;
using bolza::testing::withSets;

namespace {

PrimalModel workedModel() { return PrimalModel(scalarProblem(0, 1, 0, 0, 1, 1)); }

}  // namespace

TEST(Hamiltonian, PureControlCost) {
    PrimalModel model = workedModel();
    HamiltonianValue h = hamiltonianEval(model, 0, vec({2}), vec({3}));
    ASSERT_TRUE(h.isFinite());
    EXPECT_NEAR(h.value, 4.5, 1e-9);
}

TEST(Hamiltonian, WithStateCost) {
    PrimalModel model(scalarProblem(0, 1, 0, 1, 1));
    EXPECT_NEAR(hamiltonianEval(model, 0, vec({2}), vec({3})).value, 4.5 - 2.0, 1e-9);
}

TEST(Hamiltonian, SupportFunctionOfControlBox) {
    PrimalModel model(withSets(scalarProblem(0, 1, 0, 0, 0), ConvexSet::wholeSpace(1), interval(-1, 1)));
    for (double p : {-2.0, 0.0, 0.7}) EXPECT_NEAR(hamiltonianEval(model, 0, vec({1}), vec({p})).value, std::abs(p), 1e-8);
}

TEST(Hamiltonian, OutsideStateSetIsMinusInfinity) {
    PrimalModel model(withSets(scalarProblem(0, 1, 0, 0, 1), interval(0, 1), ConvexSet::wholeSpace(1)));
    EXPECT_EQ(hamiltonianEval(model, 0, vec({2}), vec({1})).kind, HamiltonianValue::Kind::MinusInfinity);
}

TEST(Hamiltonian, MixedClassMatchesLq) {
    auto lq = withSets(scalarProblem(0.2, 1, 0.1, 1, 1), ConvexSet::wholeSpace(1), interval(-1, 1));
    auto stages = lq.stages();
    Matrix P = Matrix::Zero(2, 2);
    P(1, 1) = 2;
    stages[0].mixed = MixedConstraintSpec{MixedFunction::quadratic(P, Vector::Zero(2), -50.0), std::nullopt};
    PrimalModel a(lq), b(BolzaProblem(stages, lq.terminal()));
    for (double p : {-3.0, 0.4, 2.0})
        EXPECT_NEAR(hamiltonianEval(a, 0, vec({0.5}), vec({p})).value, hamiltonianEval(b, 0, vec({0.5}), vec({p})).value,
                    1e-7);
}

TEST(InclusionResidual, WorkedTrajectoryIsExact) {
    PrimalModel model = workedModel();
    const double r = inclusionResidual(model, 0, vec({1}), vec({-0.5}), vec({0}), vec({-0.5}));
    EXPECT_NEAR(r, 0.0, 1e-9);
}

TEST(InclusionResidual, PerturbedCostate) {
    PrimalModel model = workedModel();
    // Moving only p_1 makes dp nonzero, where K(p, w) = +inf for w != 0.
    EXPECT_TRUE(std::isinf(inclusionResidual(model, 0, vec({1}), vec({-0.4}), vec({0.1}), vec({-0.5}))));
    // Moving both costates: 0.125 + 0.08 - 0.2 = 0.005.
    EXPECT_NEAR(inclusionResidual(model, 0, vec({1}), vec({-0.4}), vec({0}), vec({-0.5})), 0.005, 1e-9);
}

TEST(InclusionResidual, ZeroTrajectory) {
    EXPECT_NEAR(inclusionResidual(workedModel(), 0, vec({0}), vec({0}), vec({0}), vec({0})), 0.0, 1e-10);
}

TEST(InclusionResidual, BothInfiniteIsReported) {
    PrimalModel model(withSets(scalarProblem(0, 1, 0, 0, 1), interval(0, 1), ConvexSet::wholeSpace(1)));
    // x = 5 is outside X, and with Q = 0 on [0,1] K is finite; force K infinite via R = 0, U = R.
    PrimalModel degenerate(withSets(scalarProblem(0, 1, 0, 0, 0), interval(0, 1), ConvexSet::wholeSpace(1)));
    EXPECT_THROW((void)inclusionResidual(degenerate, 0, vec({5}), vec({1}), vec({0}), vec({0})), Error);
    EXPECT_TRUE(std::isinf(inclusionResidual(model, 0, vec({5}), vec({1}), vec({0}), vec({0}))));
}

TEST(HamiltonianGaps, SumEqualsInclusionResidual) {
    PrimalModel model(withSets(scalarProblem(0.3, 1.2, 0.1, 0.8, 1.5), interval(-2, 2), interval(-1, 1)));
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> d(-1.5, 1.5);
    for (int k = 0; k < 25; ++k) {
        const Vector x = vec({d(rng)}), p = vec({d(rng)}), dp = vec({d(rng)}), dx = vec({0.5 * d(rng)});
        const double el = inclusionResidual(model, 0, x, p, dp, dx);
        const HamiltonianGaps g = hamiltonianGaps(model, 0, x, p, dp, dx);
        if (std::isinf(el)) continue;
        EXPECT_GE(g.pPart, -1e-8);
        EXPECT_GE(g.xPart, -1e-8);
        EXPECT_NEAR(g.total(), el, 1e-7);
    }
}

TEST(Transversality, Examples) {
    PrimalModel model = workedModel();
    EXPECT_NEAR(transversalityResidual(model, vec({0.5}), vec({-0.5})), 0.0, 1e-12);
    EXPECT_NEAR(transversalityResidual(model, vec({0}), vec({0})), 0.0, 1e-12);
    auto base = scalarProblem(0, 1, 0, 0, 1, 0);
    PrimalModel boxed(BolzaProblem(base.stages(), TerminalCost{scalarMatrix(0), interval(-1, 1)}));
    EXPECT_NEAR(transversalityResidual(boxed, vec({1}), vec({-2})), 0.0, 1e-8);
    EXPECT_NEAR(transversalityResidual(boxed, vec({1}), vec({2})), 4.0, 1e-8);
    EXPECT_THROW((void)transversalityResidual(boxed, vec({2}), vec({0})), Error);
}

TEST(BuildCharacteristic, WorkedPair) {
    TrajectoryPair pair = buildCharacteristic(workedModel(), 0, vec({1}), vec({0.5}));
    EXPECT_EQ(pair.status, PairStatus::Characteristic);
    EXPECT_NEAR(pair.states[1](0), 0.5, 1e-8);
    EXPECT_EQ(pair.costates[0](0), -0.5);
    EXPECT_NEAR(pair.costates[1](0), -0.5, 1e-8);
    for (double r : pair.elResiduals) EXPECT_LE(r, 1e-8);
    for (double r : pair.hamResiduals) EXPECT_LE(r, 1e-8);
    EXPECT_LE(pair.transversalityResidual, 1e-8);
}

TEST(BuildCharacteristic, ZeroPair) {
    TrajectoryPair pair = buildCharacteristic(workedModel(), 0, vec({0}), vec({0}));
    EXPECT_EQ(pair.status, PairStatus::Characteristic);
    for (const auto& x : pair.states) EXPECT_NEAR(x(0), 0.0, 1e-8);
    for (const auto& p : pair.costates) EXPECT_NEAR(p(0), 0.0, 1e-8);
}

TEST(BuildCharacteristic, NonSubgradientIsFlagged) {
    TrajectoryPair pair = buildCharacteristic(workedModel(), 0, vec({1}), vec({0}));
    EXPECT_EQ(pair.status, PairStatus::NotASubgradient);
    EXPECT_NEAR(pair.gap, 0.25, 1e-8);
}

TEST(VerifyCharacteristic, WorkedTrajectoryPasses) {
    PrimalModel model = workedModel();
    TrajectoryPair pair = assemblePair(model, 0, {vec({1}), vec({0.5})}, {vec({-0.5}), vec({-0.5})});
    CharacteristicVerdict v = verifyCharacteristic(model, pair, vec({0.5}));
    EXPECT_TRUE(v.pass);
    EXPECT_LE(v.epsilon, 1e-8);
}

TEST(VerifyCharacteristic, PerturbedCostateFailsAtFirstStep) {
    PrimalModel model = workedModel();
    TrajectoryPair pair = assemblePair(model, 0, {vec({1}), vec({0.5})}, {vec({-0.5}), vec({-0.4})});
    CharacteristicVerdict v = verifyCharacteristic(model, pair, vec({0.5}));
    EXPECT_FALSE(v.pass);
    EXPECT_EQ(v.failingStep, 0);
    // Independent gap: theta(1) + omega(0.5) - 0.5 is zero, so the failure is
    // in the trajectory, and the FY gap of any p_1 != -0.5 paired with
    // eta = -p_1 through the dual is positive.
    EXPECT_GT(v.maxResidual, 1e-3);
}

TEST(VerifyCharacteristic, TrivialTailWithZeroCosts) {
    // g = 0, L = 0.5 v^2: a constant state with zero costate is optimal.
    PrimalModel model(scalarProblem(0, 1, 0, 0, 1, 0));
    TrajectoryPair pair = assemblePair(model, 0, {vec({2}), vec({2})}, {vec({0}), vec({0})});
    EXPECT_TRUE(verifyCharacteristic(model, pair, vec({0})).pass);
}

TEST(PropagateSmooth, MatchesCoupledSolves) {
    Matrix A(2, 2), B(2, 1);
    A << -0.2, 0.4, 0.1, 0.3;
    B << 1, 0.5;
    StageSpec s = makeStage(A, B, vec({0.1, -0.1}), 0.5 * Matrix::Identity(2, 2), scalarMatrix(2));
    PrimalModel model(bolza::testing::repeatedProblem(s, 4, makeTerminal(Matrix::Identity(2, 2))));
    const Vector xi = vec({1, -0.5});
    SubgradientResult sg = valueSubgradient(model, 0, xi);
    TrajectoryPair built = buildCharacteristic(model, 0, xi, sg.eta);
    TrajectoryPair fast = propagateSmooth(model, 0, xi, sg.eta);
    EXPECT_EQ(built.status, PairStatus::Characteristic);
    EXPECT_EQ(fast.status, PairStatus::Characteristic);
    for (std::size_t k = 0; k < built.states.size(); ++k) {
        EXPECT_LE(infNorm(Vector(built.states[k] - fast.states[k])), 1e-6);
        EXPECT_LE(infNorm(Vector(built.costates[k] - fast.costates[k])), 1e-6);
    }
}

TEST(PropagateSmooth, RejectsConstrainedStages) {
    PrimalModel model(withSets(scalarProblem(0, 1, 0, 0, 1), interval(-1, 1), ConvexSet::wholeSpace(1)));
    EXPECT_THROW((void)propagateSmooth(model, 0, vec({0}), vec({0})), Error);
}
