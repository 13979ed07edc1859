#include "bolza/solver.hpp"

#include <cmath>
#include <limits>

#include "bolza/characteristics.hpp"
#include "bolza/convex_program.hpp"

namespace bolza {

std::string_view toString(SolveStatus status) {
    switch (status) {
        case SolveStatus::Optimal: return "Optimal";
        case SolveStatus::Infeasible: return "Infeasible";
        case SolveStatus::Unbounded: return "Unbounded";
        case SolveStatus::IterLimit: return "IterLimit";
    }
    return "?";
}

namespace {

SolveStatus fromProgram(ProgramStatus s) {
    switch (s) {
        case ProgramStatus::Optimal: return SolveStatus::Optimal;
        case ProgramStatus::Infeasible: return SolveStatus::Infeasible;
        case ProgramStatus::Unbounded: return SolveStatus::Unbounded;
        case ProgramStatus::IterLimit: return SolveStatus::IterLimit;
    }
    return SolveStatus::IterLimit;
}

// Variables: x_tau..x_T, v_tau..v_{T-1}, stage auxiliaries, terminal auxiliaries.
// Equality rows 0..n-1 fix x_tau (unless the start is free), then one block
// x_{t+1} - x_t - v_t = 0 per stage; their multipliers are the costates.
struct Stacked {
    ConvexProgram program;
    int stages = 0;
    int velocityOffset = 0;
    std::vector<int> auxOffset;
    int startRows = 0;
};

Stacked buildStacked(const BolzaModel& model, int tau, const Vector* xi) {
    const int n = model.stateDim();
    const int T = model.horizon();
    Stacked st;
    st.stages = T - tau;
    const int K = st.stages;
    st.velocityOffset = (K + 1) * n;
    int total = st.velocityOffset + K * n;
    for (int t = tau; t < T; ++t) {
        st.auxOffset.push_back(total);
        total += model.stageFragment(t).auxDim();
    }
    const int terminalAux = total;
    total += model.terminalFragment().auxDim();

    ConvexProgram& big = st.program;
    big = ConvexProgram(total);
    if (xi != nullptr) {
        Matrix rows = Matrix::Zero(n, total);
        rows.leftCols(n) = Matrix::Identity(n, n);
        big.addEqualities(rows, *xi);
        st.startRows = n;
    }
    if (K > 0) {
        Matrix rows = Matrix::Zero(K * n, total);
        for (int k = 0; k < K; ++k) {
            rows.block(k * n, (k + 1) * n, n, n) = Matrix::Identity(n, n);
            rows.block(k * n, k * n, n, n) = -Matrix::Identity(n, n);
            rows.block(k * n, st.velocityOffset + k * n, n, n) = -Matrix::Identity(n, n);
        }
        big.addEqualities(rows, Vector::Zero(K * n));
    }
    for (int k = 0; k < K; ++k) {
        const ProgramFragment& frag = model.stageFragment(tau + k);
        const int a = frag.auxDim();
        Matrix map = Matrix::Zero(2 * n + a, total);
        map.block(0, k * n, n, n) = Matrix::Identity(n, n);
        map.block(n, st.velocityOffset + k * n, n, n) = Matrix::Identity(n, n);
        map.block(2 * n, st.auxOffset[static_cast<std::size_t>(k)], a, a) = Matrix::Identity(a, a);
        embedProgram(big, frag.program(), map);
    }
    const ProgramFragment& term = model.terminalFragment();
    const int a = term.auxDim();
    Matrix map = Matrix::Zero(n + a, total);
    map.block(0, K * n, n, n) = Matrix::Identity(n, n);
    map.block(n, terminalAux, a, a) = Matrix::Identity(a, a);
    embedProgram(big, term.program(), map);
    return st;
}

ProgramOptions programOptions(const Tolerances& tol) {
    ProgramOptions opt;
    opt.tolerance = tol.kkt;
    opt.feasibilityTolerance = tol.feas;
    return opt;
}

void checkStart(const BolzaModel& model, int tau, const Vector& z, const char* what) {
    require(tau >= 0 && tau <= model.horizon(), ErrorCode::InvalidArgument,
            std::string(what) + ": tau must satisfy 0 <= tau <= T");
    require(z.size() == model.stateDim(), ErrorCode::DimensionMismatch,
            std::string(what) + ": initial vector needs length n");
}

}  // namespace

SolveResult solveModel(const BolzaModel& model, int tau, const Vector& xi, const Tolerances& tol) {
    checkStart(model, tau, xi, "solve");
    const int n = model.stateDim();
    Stacked st = buildStacked(model, tau, &xi);
    ProgramSolution sol = solveProgram(st.program, programOptions(tol));

    SolveResult r;
    r.tau = tau;
    r.status = fromProgram(sol.status);
    r.kktResidual = sol.kktResidual;
    r.iterations = sol.iterations;
    r.residualHistory = sol.residualHistory;
    if (r.status == SolveStatus::Optimal) r.value = ExtReal(sol.objective);
    for (int k = 0; k <= st.stages; ++k) {
        r.states.push_back(sol.w.segment(k * n, n));
        r.costates.push_back(sol.eqDual.segment(k * n, n));
    }
    r.states.front() = xi;
    if (const auto* primal = dynamic_cast<const PrimalModel*>(&model)) {
        for (int k = 0; k < st.stages; ++k) {
            const int m = primal->problem().stage(tau + k).m();
            r.controls.push_back(sol.w.segment(st.auxOffset[static_cast<std::size_t>(k)], m));
        }
    }
    return r;
}

SolveResult solvePrimal(const PrimalModel& model, int tau, const Vector& xi, const Tolerances& tol) {
    return solveModel(model, tau, xi, tol);
}

SolveResult solvePrimal(const BolzaProblem& problem, int tau, const Vector& xi, const Tolerances& tol) {
    return solveModel(PrimalModel(problem), tau, xi, tol);
}

namespace {

// omega(eta) = -min_{xi, trajectory} { cost - xi.eta }.
SolveResult solveDualJoint(const PrimalModel& model, int tau, const Vector& eta, const Tolerances& tol) {
    const int n = model.stateDim();
    Stacked st = buildStacked(model, tau, nullptr);
    st.program.c.head(n) -= eta;
    ProgramSolution sol = solveProgram(st.program, programOptions(tol));

    SolveResult r;
    r.tau = tau;
    r.status = fromProgram(sol.status);
    r.kktResidual = sol.kktResidual;
    r.iterations = sol.iterations;
    r.residualHistory = sol.residualHistory;
    // sup over xi: infeasible primal means omega = -inf, unbounded means +inf.
    if (r.status == SolveStatus::Infeasible) {
        r.status = SolveStatus::Unbounded;
    } else if (r.status == SolveStatus::Unbounded) {
        r.status = SolveStatus::Infeasible;
    } else if (r.status == SolveStatus::Optimal) {
        r.value = ExtReal(-sol.objective);
    }
    r.states.push_back(-eta);
    for (int k = 0; k < st.stages; ++k) r.states.push_back(sol.eqDual.segment(k * n, n));
    for (int k = 0; k <= st.stages; ++k) r.costates.push_back(sol.w.segment(k * n, n));
    return r;
}

}  // namespace

SolveResult solveDual(const PrimalModel& model, int tau, const Vector& eta, const Tolerances& tol) {
    checkStart(model, tau, eta, "solve dual");
    if (!model.hasConjugateFragments()) return solveDualJoint(model, tau, eta, tol);
    DualModel dual(model);
    SolveResult r = solveModel(dual, tau, -eta, tol);
    r.controls.clear();
    return r;
}

SolveResult solveDual(const BolzaProblem& problem, int tau, const Vector& eta, const Tolerances& tol) {
    return solveDual(PrimalModel(problem), tau, eta, tol);
}

SubgradientResult valueSubgradient(const PrimalModel& model, int tau, const Vector& xi, const Tolerances& tol) {
    SubgradientResult out;
    out.primal = solvePrimal(model, tau, xi, tol);
    require(out.primal.optimal(), ErrorCode::InfeasiblePoint,
            std::string("value subgradient: primal solve ended with ") + std::string(toString(out.primal.status)));
    out.eta = -out.primal.costates.front();
    out.dual = solveDual(model, tau, out.eta, tol);
    if (!out.dual.optimal()) {
        out.fyResidual = std::numeric_limits<double>::infinity();
        return out;
    }
    const double theta = out.primal.value.value();
    const double omega = out.dual.value.value();
    const double bilinear = xi.dot(out.eta);
    out.fyResidual = theta + omega - bilinear;
    out.certified = out.fyResidual <= tol.cert * (1.0 + std::abs(theta) + std::abs(omega) + std::abs(bilinear));
    return out;
}

DualityCertificate dualityCertificate(const PrimalModel& model, const SolveResult& primal, const SolveResult& dual,
                                      const Vector& xi, const Vector& eta, const Tolerances& tol) {
    DualityCertificate c;
    c.xi = xi;
    c.eta = eta;
    c.primalStatus = primal.status;
    c.dualStatus = dual.status;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double inf = std::numeric_limits<double>::infinity();
    auto settled = [](SolveStatus s) { return s == SolveStatus::Optimal || s == SolveStatus::Infeasible; };
    if (!settled(primal.status) || !settled(dual.status)) {
        c.gap = c.fyResidual = c.transversalityResidual = nan;
        return c;
    }
    c.theta = primal.value;
    c.omega = dual.value;
    if (c.theta.isInfinite() || c.omega.isInfinite()) {
        c.gapInfinite = true;
        c.gap = c.fyResidual = c.transversalityResidual = inf;
        return c;
    }
    c.gap = c.theta.value() + c.omega.value() - xi.dot(eta);

    const TrajectoryPair pair = assemblePair(model, primal.tau, primal.states, dual.states, tol);
    c.elResiduals = pair.elResiduals;
    c.transversalityResidual = pair.transversalityResidual;
    c.fyResidual = c.transversalityResidual;
    for (double r : c.elResiduals) c.fyResidual += r;
    return c;
}

DualityCertificate dualityCertificate(const PrimalModel& model, int tau, const Vector& xi, const Vector& eta,
                                      const Tolerances& tol) {
    const SolveResult primal = solvePrimal(model, tau, xi, tol);
    const SolveResult dual = solveDual(model, tau, eta, tol);
    return dualityCertificate(model, primal, dual, xi, eta, tol);
}

}  // namespace bolza
