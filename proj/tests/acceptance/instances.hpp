#pragma once

#include <random>

#include "bolza/problem.hpp"

namespace bolza::acceptance {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
inline int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline Matrix uniformMatrix(Rng& rng, int rows, int cols, double scale) {
    Matrix M(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) M(i, j) = uniform(rng, -scale, scale);
    return M;
}

inline Vector uniformVector(Rng& rng, int n, double scale) { return uniformMatrix(rng, n, 1, scale).col(0); }

/// G G' with G of random rank between 1 and n.
inline Matrix randomPsd(Rng& rng, int n, double scale) {
    const Matrix G = uniformMatrix(rng, n, pick(rng, 1, n), scale);
    return G * G.transpose();
}

inline ConvexSet randomBox(Rng& rng, int n, double lo, double hi) {
    Vector l(n), u(n);
    for (int i = 0; i < n; ++i) {
        l(i) = -uniform(rng, lo, hi);
        u(i) = uniform(rng, lo, hi);
    }
    return ConvexSet::box(l, u);
}

/// k halfspaces a.z <= b with unit normals and b in [lo, hi], so 0 is interior.
inline ConvexSet randomPolytope(Rng& rng, int n, int k, double lo, double hi) {
    Matrix C(k, n);
    Vector d(k);
    for (int i = 0; i < k; ++i) {
        Vector a = uniformVector(rng, n, 1.0);
        if (a.norm() < 1e-3) a = Vector::Unit(n, 0);
        C.row(i) = a.normalized().transpose();
        d(i) = uniform(rng, lo, hi);
    }
    return ConvexSet::polyhedron(C, d);
}

/// One of whole space / box / polytope for a control set.
inline ConvexSet randomControlSet(Rng& rng, int m, int kind) {
    switch (kind) {
        case 0: return ConvexSet::wholeSpace(m);
        case 1: return randomBox(rng, m, 0.5, 2.0);
        default: return randomPolytope(rng, m, m + 2, 0.5, 2.0);
    }
}

struct RandomLqOptions {
    int maxStateDim = 3;
    int maxControlDim = 2;
    int maxHorizon = 5;
    bool constrained = true;
};

/// Random LQ instance with x in ~[-3, 3] sets, PSD costs, and either R > 0
/// or compact control sets so that the stage costs are closed.
inline BolzaProblem randomLq(Rng& rng, const RandomLqOptions& opt = {}) {
    const int n = pick(rng, 1, opt.maxStateDim);
    const int m = pick(rng, 1, opt.maxControlDim);
    const int T = pick(rng, 1, opt.maxHorizon);
    std::vector<StageSpec> stages;
    for (int t = 0; t < T; ++t) {
        const int uKind = opt.constrained ? pick(rng, 0, 2) : 0;
        const bool singularR = uKind == 1 && pick(rng, 0, 3) == 0;
        Matrix R = singularR ? randomPsd(rng, m, 1.0)
                             : Matrix(randomPsd(rng, m, 1.0) + 0.2 * Matrix::Identity(m, m));
        if (singularR && m == 1) R.setZero();
        StageSpec s = makeStage(uniformMatrix(rng, n, n, 0.4), uniformMatrix(rng, n, m, 1.0), uniformVector(rng, n, 0.3),
                                randomPsd(rng, n, 0.8), R);
        if (opt.constrained) {
            if (pick(rng, 0, 1) == 1) s.stateSet = randomBox(rng, n, 2.5, 5.0);
            s.controlSet = randomControlSet(rng, m, uKind);
        }
        stages.push_back(std::move(s));
    }
    TerminalCost g = makeTerminal(randomPsd(rng, n, 1.0));
    if (opt.constrained) {
        const int kind = pick(rng, 0, 4);
        if (kind == 3) g.set = randomBox(rng, n, 2.0, 4.0);
        if (kind == 4) g.set = randomPolytope(rng, n, n + 2, 2.0, 4.0);
    }
    return {stages, g};
}

}  // namespace bolza::acceptance
