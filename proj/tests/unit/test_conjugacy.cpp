#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "../support/instances.hpp"
#include "bolza/conjugacy.hpp"
#include "bolza/grid_function.hpp"
#include "bolza/model.hpp"

using namespace bolza;
using bolza::testing::interval;
using bolza::testing::scalarProblem;
using bolza::testing::withSets;

TEST(ConjugateQuadratic, SelfConjugateScalar) {
    EXPECT_NEAR(conjugateQuadratic(scalarMatrix(1), ConvexSet::wholeSpace(1), vec({3})).value(), 4.5, 1e-12);
}

TEST(ConjugateQuadratic, IndicatorGivesSupportFunction) {
    EXPECT_NEAR(conjugateQuadratic(scalarMatrix(0), interval(-1, 1), vec({2})).value(), 2.0, 1e-8);
    EXPECT_NEAR(conjugateQuadratic(scalarMatrix(0), interval(-1, 1), vec({-0.5})).value(), 0.5, 1e-8);
}

TEST(ConjugateQuadratic, ScaledQuadratic) {
    EXPECT_NEAR(conjugateQuadratic(scalarMatrix(2), ConvexSet::wholeSpace(1), vec({1})).value(), 0.25, 1e-12);
}

TEST(ConjugateQuadratic, UnboundedDirectionGivesInfinity) {
    EXPECT_TRUE(conjugateQuadratic(scalarMatrix(0), ConvexSet::wholeSpace(1), vec({1})).isInfinite());
    EXPECT_TRUE(conjugateQuadratic(scalarMatrix(0), interval(0, INFINITY), vec({1})).isInfinite());
    EXPECT_NEAR(conjugateQuadratic(scalarMatrix(0), interval(0, INFINITY), vec({-1})).value(), 0.0, 1e-8);
}

TEST(ConjugateQuadratic, BoxAgainstBruteForce) {
    // sup over [-1,2] of x y - x^2, sampled on a fine grid.
    const Matrix Q = scalarMatrix(2);
    const ConvexSet X = interval(-1, 2);
    for (double y : {-5.0, -1.0, 0.3, 2.0, 7.0}) {
        double best = -INFINITY;
        for (int i = 0; i <= 30000; ++i) {
            const double x = -1.0 + 3.0 * i / 30000.0;
            best = std::max(best, x * y - x * x);
        }
        EXPECT_NEAR(conjugateQuadratic(Q, X, vec({y})).value(), best, 1e-6) << "y=" << y;
    }
}

TEST(ConjugateQuadratic, ConvexInY) {
    Matrix Q(2, 2);
    Q << 1, 0, 0, 0;
    const ConvexSet X = ConvexSet::box(vec({-1, -2}), vec({3, 1}));
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> d(-3, 3);
    for (int k = 0; k < 20; ++k) {
        const Vector a = vec({d(rng), d(rng)}), b = vec({d(rng), d(rng)});
        const double fa = conjugateQuadratic(Q, X, a).value();
        const double fb = conjugateQuadratic(Q, X, b).value();
        const double fm = conjugateQuadratic(Q, X, 0.5 * (a + b)).value();
        EXPECT_LE(fm, 0.5 * (fa + fb) + 1e-8);
    }
}

TEST(DualTerminal, Examples) {
    EXPECT_NEAR(dualTerminal(scalarProblem(0, 1, 0, 0, 1, 1), vec({3})).value(), 4.5, 1e-12);
    EXPECT_NEAR(dualTerminal(scalarProblem(0, 1, 0, 0, 1, 2), vec({3})).value(), 9.0 / 4.0, 1e-12);

    auto p = scalarProblem(0, 1, 0, 0, 1, 0);
    BolzaProblem pointTerminal(p.stages(), TerminalCost{scalarMatrix(0), ConvexSet::point(vec({0}))});
    for (double b : {-2.0, 0.0, 5.0}) EXPECT_NEAR(dualTerminal(pointTerminal, vec({b})).value(), 0.0, 1e-8);
}

TEST(DualLagrangian, PureControlCost) {
    auto prob = scalarProblem(0, 1, 0, 0, 1);
    EXPECT_TRUE(dualLagrangianEval(prob, 0, vec({1}), vec({0.5})).isInfinite());
    EXPECT_NEAR(dualLagrangianEval(prob, 0, vec({3}), vec({0})).value(), 4.5, 1e-12);
}

TEST(DualLagrangian, SplitQuadratic) {
    auto prob = scalarProblem(0, 1, 0, 1, 1);
    EXPECT_NEAR(dualLagrangianEval(prob, 0, vec({2}), vec({-1})).value(), 0.5 + 2.0, 1e-12);
}

TEST(DualLagrangian, DriftTerm) {
    auto prob = scalarProblem(0, 1, 2, 1, 1);
    EXPECT_NEAR(dualLagrangianEval(prob, 0, vec({2}), vec({-1})).value(), 0.5 + 2.0 + 4.0, 1e-12);
}

TEST(DualLagrangian, AgreesWithModelFragment) {
    auto prob = withSets(scalarProblem(0.3, -0.7, 0.2, 0.5, 1.5), interval(-1, 2), interval(-0.5, 0.5));
    PrimalModel model(prob);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> d(-2, 2);
    for (int k = 0; k < 15; ++k) {
        const Vector p = vec({d(rng)}), w = vec({d(rng)});
        EXPECT_NEAR(dualLagrangianEval(prob, 0, p, w).value(), model.dualLagrangian(0, p, w).value(), 1e-7);
    }
}

TEST(DualLagrangian, FenchelYoungInequality) {
    auto prob = withSets(scalarProblem(0.3, -0.7, 0.2, 0.5, 1.5), interval(-1, 2), interval(-0.5, 0.5));
    PrimalModel model(prob);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> d(-2, 2);
    for (int k = 0; k < 30; ++k) {
        const Vector x = vec({d(rng)}), v = vec({d(rng)}), p = vec({d(rng)}), w = vec({d(rng)});
        ExtReal L = model.lagrangian(0, x, v);
        ExtReal K = dualLagrangianEval(prob, 0, p, w);
        if (L.isInfinite() || K.isInfinite()) continue;
        EXPECT_GE(L.value() + K.value(), x.dot(w) + v.dot(p) - 1e-9);
    }
}

TEST(DualAsBolza, ScalarLagrangian) {
    PrimalModel model(scalarProblem(0, 1, 0, 1, 1));
    DualModel dual = dualAsBolza(model);
    EXPECT_TRUE(dual.isDualized());
    // L~(p,w) = K(p+w, w) = 0.5 w^2 + 0.5 (p+w)^2
    EXPECT_NEAR(dual.lagrangian(0, vec({1}), vec({2})).value(), 2.0 + 4.5, 1e-8);
}

TEST(DualAsBolza, ZeroVelocitySlice) {
    PrimalModel model(scalarProblem(0, 1, 0, 0, 1));
    DualModel dual = dualAsBolza(model);
    EXPECT_NEAR(dual.lagrangian(0, vec({3}), vec({0})).value(), 4.5, 1e-8);
    EXPECT_TRUE(dual.lagrangian(0, vec({3}), vec({1})).isInfinite());
}

TEST(DualAsBolza, DoubleDualizationRecoversLagrangian) {
    PrimalModel model(scalarProblem(0.2, 1, 0.5, 1, 2));
    DualModel dual = dualAsBolza(model);
    DualModel twice = dualAsBolza(dual);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> d(-3, 3);
    for (int k = 0; k < 100; ++k) {
        const Vector x = vec({d(rng)}), v = vec({d(rng)});
        EXPECT_NEAR(twice.lagrangian(0, x, v).value(), model.lagrangian(0, x, v).value(), 1e-8);
    }
}

TEST(DualAsBolza, TerminalCostsSwap) {
    PrimalModel model(scalarProblem(0, 1, 0, 1, 1, 2));
    DualModel dual = dualAsBolza(model);
    EXPECT_NEAR(dual.terminal(vec({3})).value(), 9.0 / 4.0, 1e-8);
    EXPECT_NEAR(dualAsBolza(dual).terminal(vec({3})).value(), 9.0, 1e-8);
}

TEST(GammaK, PositiveDefiniteAcceptsEverything) {
    auto prob = scalarProblem(0.4, 1, 0, 1, 1);
    GammaK gamma(prob, 0, vec({1.5}));
    for (double w : {-10.0, 0.0, 3.0}) EXPECT_TRUE(gamma.contains(vec({w})));
    EXPECT_TRUE(pMembership(prob, 0, vec({1.5})));
}

TEST(GammaK, FreeStateWithoutCostForcesZeroVelocity) {
    // Q = 0, X = R, A = 0: (A'+I)w + A'p = w must vanish.
    auto prob = scalarProblem(0, 1, 0, 0, 1);
    GammaK gamma(prob, 0, vec({2}));
    EXPECT_TRUE(gamma.contains(vec({0})));
    EXPECT_FALSE(gamma.contains(vec({-2})));
    EXPECT_FALSE(gamma.contains(vec({0.5})));
    EXPECT_TRUE(pMembership(prob, 0, vec({2})));
}

TEST(GammaK, FreeControlWithoutCostRestrictsCostate) {
    // Additionally R = 0, U = R: B'(p + w) = p must vanish.
    auto prob = scalarProblem(0, 1, 0, 0, 0);
    EXPECT_FALSE(pMembership(prob, 0, vec({2})));
    EXPECT_TRUE(pMembership(prob, 0, vec({0})));
    EXPECT_TRUE(GammaK(prob, 0, vec({0})).contains(vec({0})));
}

TEST(GammaK, UnconstrainedMembershipIsSymmetric) {
    Matrix A(2, 2), B(2, 1);
    A << -1, 0.5, 0, 0.2;
    B << 1, 0;
    std::vector<StageSpec> stages{makeStage(A, B, Vector::Zero(2), Matrix::Zero(2, 2), Matrix::Zero(1, 1))};
    BolzaProblem prob(stages, makeTerminal(Matrix::Identity(2, 2)));
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> d(-2, 2);
    int accepted = 0;
    for (int k = 0; k < 20; ++k) {
        const Vector p = k % 2 == 0 ? vec({0, d(rng)}) : vec({d(rng), d(rng)});
        const bool plus = pMembership(prob, 0, p);
        EXPECT_EQ(plus, pMembership(prob, 0, -p));
        accepted += plus ? 1 : 0;
    }
    EXPECT_GT(accepted, 0);
}

TEST(GammaK, ConeConstraintOnState) {
    // X = [0, inf), Q = 0: w + A'(p+w) must be <= 0.
    auto prob = withSets(scalarProblem(0, 1, 0, 0, 1), interval(0, INFINITY), ConvexSet::wholeSpace(1));
    GammaK gamma(prob, 0, vec({1}));
    EXPECT_TRUE(gamma.contains(vec({-1})));
    EXPECT_TRUE(gamma.contains(vec({0})));
    EXPECT_FALSE(gamma.contains(vec({0.1})));
}

TEST(GridFunction, LltOfHalfSquare) {
    GridFunction f = GridFunction::sample({{-5, 5, 2001}}, [](const Vector& x) { return 0.5 * x(0) * x(0); });
    GridFunction g = lltConjugate(f);
    for (int i = 0; i < static_cast<int>(g.size()); ++i) {
        const double y = g.axes()[0].at(i);
        if (std::abs(y) <= 4.0) EXPECT_NEAR(g.at(i), 0.5 * y * y, 2.5e-3) << y;
    }
    EXPECT_TRUE(g.isConvex(1e-7));
}

TEST(GridFunction, LltOfAbsoluteValue) {
    GridFunction f = GridFunction::sample({{-5, 5, 1001}}, [](const Vector& x) { return std::abs(x(0)); });
    GridFunction g = lltConjugate(f, {{-3, 3, 601}});
    for (int i = 0; i < static_cast<int>(g.size()); ++i) {
        const double y = g.axes()[0].at(i);
        if (std::abs(y) <= 1.0) EXPECT_NEAR(g.at(i), 0.0, 1e-12) << y;
        if (std::abs(y) >= 1.5) EXPECT_GE(g.at(i), 2.5) << y;
    }
}

TEST(GridFunction, BiconjugateReproducesInput) {
    GridFunction f = GridFunction::sample({{-5, 5, 2001}}, [](const Vector& x) { return 0.5 * x(0) * x(0); });
    GridFunction ff = lltConjugate(lltConjugate(f));
    const double bound = 2.0 * f.axes()[0].spacing() * 5.0;
    for (int i = 0; i < static_cast<int>(ff.size()); ++i) {
        const double x = ff.axes()[0].at(i);
        if (std::abs(x) <= 4.0) EXPECT_NEAR(ff.at(i), 0.5 * x * x, bound) << x;
    }
}

TEST(GridFunction, TwoDimensionalConjugate) {
    GridFunction f = GridFunction::sample({{-4, 4, 161}, {-4, 4, 161}}, [](const Vector& x) {
        return 0.5 * x(0) * x(0) + x(1) * x(1);
    });
    GridFunction g = lltConjugate(f, {{-2, 2, 41}, {-2, 2, 41}});
    for (std::size_t k = 0; k < g.size(); ++k) {
        const Vector y = g.node(k);
        EXPECT_NEAR(g.values()[k], 0.5 * y(0) * y(0) + 0.25 * y(1) * y(1), 2e-3);
    }
}

TEST(GridFunction, TooFewFiniteNodes) {
    GridFunction f({{0, 1, 4}}, {INFINITY, 1.0, 2.0, INFINITY});
    EXPECT_THROW((void)lltConjugate(f), Error);
}

TEST(GridFunction, NonconvexInputRejected) {
    GridFunction f({{0, 1, 4}}, {0.0, 1.0, 0.0, 1.0});
    EXPECT_THROW((void)lltConjugate(f), Error);
}

TEST(GridFunction, InfiniteNodesAreSkipped) {
    // Indicator of [0, 1] sampled on [-1, 2].
    GridFunction f = GridFunction::sample({{-1, 2, 31}}, [](const Vector& x) {
        return x(0) >= -1e-12 && x(0) <= 1 + 1e-12 ? 0.0 : INFINITY;
    });
    GridFunction g = lltConjugate(f, {{-2, 2, 5}});
    EXPECT_NEAR(g.at(0), 0.0, 1e-12);   // y = -2: x = 0
    EXPECT_NEAR(g.at(4), 2.0, 1e-12);   // y = 2: x = 1
}

TEST(GridFunction, CsvRoundTrip) {
    GridFunction f = GridFunction::sample({{-1, 1, 3}, {0, 2, 4}}, [](const Vector& x) {
        return x(1) > 1.5 ? INFINITY : x(0) * x(0) + 0.1 * x(1);
    });
    std::stringstream ss;
    f.writeCsv(ss);
    EXPECT_EQ(ss.str().substr(0, 19), "x,y,value,isFinite\n");
    GridFunction g = GridFunction::readCsv(ss);
    ASSERT_EQ(g.size(), f.size());
    for (std::size_t k = 0; k < f.size(); ++k) EXPECT_EQ(g.values()[k], f.values()[k]);
    EXPECT_EQ(g.axes()[1].count, 4);
}

TEST(GridFunction, Interpolation) {
    GridFunction f = GridFunction::sample({{0, 2, 3}}, [](const Vector& x) { return x(0) * x(0); });
    EXPECT_NEAR(f.interpolate(vec({0.5})), 0.5, 1e-15);
    EXPECT_TRUE(std::isinf(f.interpolate(vec({2.5}))));
}
