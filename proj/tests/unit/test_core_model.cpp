#include <gtest/gtest.h>

#include <random>

#include "bolza/errors.hpp"
#include "bolza/lagrangian.hpp"
#include "bolza/model.hpp"

using namespace bolza;

namespace {

BolzaProblem scalarProblem(double A, double B, double phi, double Q, double R, double Qf = 1.0) {
    std::vector<StageSpec> stages{makeStage(scalarMatrix(A), scalarMatrix(B), vec({phi}), scalarMatrix(Q),
                                            scalarMatrix(R))};
    return {stages, makeTerminal(scalarMatrix(Qf))};
}

BolzaProblem withSets(BolzaProblem p, const ConvexSet& X, const ConvexSet& U) {
    auto stages = p.stages();
    stages[0].stateSet = X;
    stages[0].controlSet = U;
    return {stages, p.terminal()};
}

}  // namespace

TEST(LagrangianEval, PureControlCost) {
    PrimalModel model(scalarProblem(0, 1, 0, 0, 1));
    auto lv = lagrangianEval(model, 0, vec({3}), vec({2}));
    EXPECT_NEAR(lv.value.value(), 2.0, 1e-9);
    EXPECT_NEAR(lv.control(0), 2.0, 1e-8);
}

TEST(LagrangianEval, OutsideStateSetIsInfinite) {
    PrimalModel model(withSets(scalarProblem(0, 1, 0, 0, 1), ConvexSet::box(vec({0}), vec({1})),
                               ConvexSet::wholeSpace(1)));
    EXPECT_TRUE(lagrangianEval(model, 0, vec({2}), vec({0.3})).value.isInfinite());
}

TEST(LagrangianEval, StateAndControlCost) {
    PrimalModel model(scalarProblem(0, 1, 0, 1, 1));
    // direct substitution u = v
    EXPECT_NEAR(lagrangianEval(model, 0, vec({1}), vec({-0.5})).value.value(), 0.5 + 0.125, 1e-9);
}

TEST(LagrangianEval, UnattainableInnerInfimumIsReported) {
    // B = 0, R = 0, U = R: the inner problem is fine (value 0) but v must equal phi.
    PrimalModel model(scalarProblem(0, 0, 0, 0, 0));
    EXPECT_NEAR(lagrangianEval(model, 0, vec({1}), vec({0})).value.value(), 0.0, 1e-9);
    EXPECT_TRUE(lagrangianEval(model, 0, vec({1}), vec({1})).value.isInfinite());
}

TEST(LagrangianSubgradient, SmoothQuadratic) {
    PrimalModel model(scalarProblem(0, 1, 0, 0, 1));
    auto sg = lagrangianSubgradient(model, 0, vec({3}), vec({2}));
    EXPECT_NEAR(sg.a(0), 0.0, 1e-7);
    EXPECT_NEAR(sg.b(0), 2.0, 1e-7);
    EXPECT_NEAR(sg.residual, 0.0, 1e-7);
}

TEST(LagrangianSubgradient, WithStateCost) {
    PrimalModel model(scalarProblem(0, 1, 0, 1, 1));
    auto sg = lagrangianSubgradient(model, 0, vec({1}), vec({-0.5}));
    EXPECT_NEAR(sg.a(0), 1.0, 1e-7);
    EXPECT_NEAR(sg.b(0), -0.5, 1e-7);
    EXPECT_NEAR(sg.residual, 0.0, 1e-7);
}

TEST(LagrangianSubgradient, BoundaryOfStateBox) {
    PrimalModel model(withSets(scalarProblem(0, 1, 0, 0, 1), ConvexSet::box(vec({0}), vec({1})),
                               ConvexSet::wholeSpace(1)));
    auto sg = lagrangianSubgradient(model, 0, vec({1}), vec({0}));
    EXPECT_GE(sg.a(0), -1e-8);
    EXPECT_NEAR(sg.b(0), 0.0, 1e-7);
    EXPECT_GE(sg.residual, -1e-9);
    EXPECT_LE(sg.residual, 1e-6);
    // Subgradient inequality checked by brute force on a grid.
    const double base = 0.0;
    for (int i = 0; i <= 40; ++i) {
        for (int j = 0; j <= 40; ++j) {
            const double x = -0.5 + 2.0 * i / 40.0;
            const double v = -2.0 + 4.0 * j / 40.0;
            const ExtReal L = lagrangianEval(model, 0, vec({x}), vec({v})).value;
            if (L.isInfinite()) continue;
            EXPECT_GE(L.value(), base + sg.a(0) * (x - 1.0) + sg.b(0) * v - 1e-7);
        }
    }
}

TEST(LagrangianSubgradient, InfinitePointThrows) {
    PrimalModel model(withSets(scalarProblem(0, 1, 0, 0, 1), ConvexSet::box(vec({0}), vec({1})),
                               ConvexSet::wholeSpace(1)));
    EXPECT_THROW(lagrangianSubgradient(model, 0, vec({2}), vec({0})), Error);
}

TEST(GammaL, IdentityImageOfBox) {
    auto problem = withSets(scalarProblem(0, 1, 0, 0, 1), ConvexSet::wholeSpace(1), ConvexSet::box(vec({-1}), vec({1})));
    auto g = gammaL(problem, 0, vec({0.3}));
    ASSERT_FALSE(g.isEmpty());
    ConvexSet s = g.asSet();
    ASSERT_EQ(s.kind(), ConvexSet::Kind::Box);
    EXPECT_DOUBLE_EQ(s.lower()(0), -1.0);
    EXPECT_DOUBLE_EQ(s.upper()(0), 1.0);
}

TEST(GammaL, EmptyOutsideStateSet) {
    auto problem = withSets(scalarProblem(0, 1, 0, 0, 1), ConvexSet::box(vec({0}), vec({1})), ConvexSet::wholeSpace(1));
    EXPECT_TRUE(gammaL(problem, 0, vec({2})).isEmpty());
}

TEST(GammaL, ShiftedInterval) {
    auto problem = withSets(scalarProblem(1, 1, 2, 0, 1), ConvexSet::wholeSpace(1), ConvexSet::box(vec({0}), vec({1})));
    auto g = gammaL(problem, 0, vec({3}));
    ConvexSet s = g.asSet();
    EXPECT_DOUBLE_EQ(s.lower()(0), 5.0);
    EXPECT_DOUBLE_EQ(s.upper()(0), 6.0);
    EXPECT_TRUE(g.contains(vec({5.5})));
    EXPECT_FALSE(g.contains(vec({6.5})));
    EXPECT_TRUE(g.inRelativeInterior(vec({5.5})));
    EXPECT_FALSE(g.inRelativeInterior(vec({5.0})));
}

TEST(GammaL, RankDeficientImageIsAPolytope) {
    // B = [1 1] on the unit square: image [0, 2].
    std::vector<StageSpec> st{makeStage(scalarMatrix(0), (Matrix(1, 2) << 1, 1).finished(), vec({0}), scalarMatrix(0),
                                        Matrix::Identity(2, 2))};
    st[0].controlSet = ConvexSet::box(vec({0, 0}), vec({1, 1}));
    BolzaProblem problem(st, makeTerminal(scalarMatrix(1)));
    ConvexSet s = gammaL(problem, 0, vec({0})).asSet();
    EXPECT_TRUE(s.contains(vec({0})));
    EXPECT_TRUE(s.contains(vec({2})));
    EXPECT_FALSE(s.contains(vec({2.1})));
    EXPECT_FALSE(s.contains(vec({-0.1})));
}

TEST(TerminalCost, ValueAndSubgradient) {
    PrimalModel model(scalarProblem(0, 1, 0, 0, 1, 1.0));
    EXPECT_NEAR(terminalEval(model, vec({2})).value(), 2.0, 1e-12);
    auto sg = terminalSubgradient(model, vec({2}));
    EXPECT_NEAR(sg.y(0), 2.0, 1e-9);
    EXPECT_NEAR(sg.residual, 0.0, 1e-8);
}

TEST(TerminalCost, OutsideDomain) {
    BolzaProblem p({makeStage(scalarMatrix(0), scalarMatrix(1), vec({0}), scalarMatrix(0), scalarMatrix(1))},
                   TerminalCost{scalarMatrix(0), ConvexSet::box(vec({-1}), vec({1}))});
    PrimalModel model(p);
    EXPECT_TRUE(terminalEval(model, vec({1.5})).isInfinite());
    EXPECT_THROW(terminalSubgradient(model, vec({1.5})), Error);
    auto sg = terminalSubgradient(model, vec({1}));
    EXPECT_NEAR(sg.y(0), 0.0, 1e-7);
    EXPECT_NEAR(sg.residual, 0.0, 1e-7);
}

TEST(LagrangianProperties, ConvexAlongSegments) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(-2, 2);
    Matrix A(2, 2), B(2, 1);
    A << 0.1, 0.2, -0.3, 0.05;
    B << 1, 0.5;
    std::vector<StageSpec> st{makeStage(A, B, vec({0.1, -0.2}), Matrix::Identity(2, 2), scalarMatrix(2))};
    st[0].controlSet = ConvexSet::box(vec({-1}), vec({1}));
    PrimalModel model(BolzaProblem(st, makeTerminal(Matrix::Identity(2, 2))));
    int checked = 0;
    for (int k = 0; k < 60; ++k) {
        const Vector x1 = vec({U(rng), U(rng)});
        const Vector x2 = vec({U(rng), U(rng)});
        const Vector u1 = vec({U(rng) / 2}), u2 = vec({U(rng) / 2});
        const Vector v1 = A * x1 + B * u1 + st[0].phi;
        const Vector v2 = A * x2 + B * u2 + st[0].phi;
        const double lam = 0.3;
        const ExtReal a = model.lagrangian(0, x1, v1);
        const ExtReal b = model.lagrangian(0, x2, v2);
        const ExtReal c = model.lagrangian(0, lam * x1 + (1 - lam) * x2, lam * v1 + (1 - lam) * v2);
        ASSERT_TRUE(a.isFinite() && b.isFinite() && c.isFinite());
        EXPECT_LE(c.value(), lam * a.value() + (1 - lam) * b.value() + 1e-9);
        ++checked;
    }
    EXPECT_EQ(checked, 60);
}

TEST(ExtRealArithmetic, InfinityAbsorbs) {
    ExtReal inf = ExtReal::infinity();
    EXPECT_TRUE((inf + ExtReal(1.0)).isInfinite());
    EXPECT_TRUE((inf - inf).isInfinite());
    EXPECT_THROW(ExtReal(-std::numeric_limits<double>::infinity()), Error);
    EXPECT_THROW(ExtReal(std::nan("")), Error);
}
