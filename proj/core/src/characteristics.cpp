#include "bolza/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bolza/conjugacy.hpp"
#include "bolza/convex_program.hpp"

namespace bolza {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Scale of the bilinear pairing of a step, used to make residual checks
// unit-insensitive.
double stepScale(const Vector& x, const Vector& pNext, const Vector& dp, const Vector& dx) {
    return 1.0 + std::abs(x.dot(dp)) + std::abs(dx.dot(pNext));
}

}  // namespace

std::string_view toString(PairStatus status) {
    switch (status) {
        case PairStatus::Characteristic: return "Characteristic";
        case PairStatus::NotASubgradient: return "NotASubgradient";
        case PairStatus::SolverFailure: return "SolverFailure";
    }
    return "?";
}

HamiltonianValue hamiltonianEval(const PrimalModel& model, int t, const Vector& x, const Vector& p,
                                 const Tolerances& tol) {
    const BolzaProblem& problem = model.problem();
    const int n = problem.stateDim();
    require(x.size() == n && p.size() == n, ErrorCode::DimensionMismatch, "hamiltonian: x and p need length n");
    const StageSpec& s = problem.stage(t);
    HamiltonianValue h;
    if (!s.stateSet.contains(x, tol.feas)) {
        h.kind = HamiltonianValue::Kind::MinusInfinity;
        return h;
    }
    // H = -0.5 x'Qx + p.(Ax + phi) + sup_u { (B'p).u - 0.5 u'Ru - l(x,u) }
    const double base = -0.5 * x.dot(s.Q * x) + p.dot(s.A * x + s.phi);
    const Vector y = s.B.transpose() * p;
    if (!s.mixed) {
        ExtReal c = conjugateQuadratic(s.R, s.controlSet, y, tol);
        if (c.isInfinite()) {
            h.kind = HamiltonianValue::Kind::PlusInfinity;
        } else {
            h.value = base + c.value();
        }
        return h;
    }
    const int m = s.m();
    ConvexProgram prog(m);
    prog.P = s.R;
    prog.c = -y;
    s.controlSet.addConstraintsTo(prog, 0);
    Matrix map = Matrix::Zero(n + m, m);
    map.bottomRows(m) = Matrix::Identity(m, m);
    Vector offset = Vector::Zero(n + m);
    offset.head(n) = x;
    if (s.mixed->constraint) prog.constraints.push_back(SmoothTerm{map, offset, s.mixed->constraint->function()});
    if (s.mixed->runningCost) prog.objective.push_back(SmoothTerm{map, offset, s.mixed->runningCost->function()});
    ProgramOptions opt;
    opt.tolerance = tol.kkt;
    ProgramSolution sol = solveProgram(prog, opt);
    switch (sol.status) {
        case ProgramStatus::Optimal: h.value = base - sol.objective; break;
        case ProgramStatus::Infeasible: h.kind = HamiltonianValue::Kind::MinusInfinity; break;
        case ProgramStatus::Unbounded:
        case ProgramStatus::IterLimit: h.kind = HamiltonianValue::Kind::PlusInfinity; break;
    }
    return h;
}

double inclusionResidual(const BolzaModel& model, int t, const Vector& x, const Vector& pNext, const Vector& dp,
                         const Vector& dx, const Tolerances& tol) {
    const ExtReal L = model.lagrangian(t, x, dx, tol);
    const ExtReal K = model.dualLagrangian(t, pNext, dp, tol);
    if (L.isInfinite() && K.isInfinite())
        fail(ErrorCode::InfeasiblePoint, "inclusion residual: both L and K are +infinity");
    if (L.isInfinite() || K.isInfinite()) return kInf;
    return L.value() + K.value() - (x.dot(dp) + dx.dot(pNext));
}

HamiltonianGaps hamiltonianGaps(const PrimalModel& model, int t, const Vector& x, const Vector& pNext,
                                const Vector& dp, const Vector& dx, const Tolerances& tol) {
    HamiltonianGaps g{kInf, kInf};
    const HamiltonianValue H = hamiltonianEval(model, t, x, pNext, tol);
    if (!H.isFinite()) return g;
    const ExtReal L = model.lagrangian(t, x, dx, tol);
    const ExtReal K = model.dualLagrangian(t, pNext, dp, tol);
    if (L.isFinite()) g.pPart = H.value + L.value() - pNext.dot(dx);
    if (K.isFinite()) g.xPart = K.value() - H.value - x.dot(dp);
    return g;
}

double transversalityResidual(const BolzaModel& model, const Vector& xT, const Vector& pT, const Tolerances& tol) {
    const ExtReal g = model.terminal(xT, tol);
    if (g.isInfinite()) fail(ErrorCode::InfeasiblePoint, "transversality: x_T is outside dom g");
    const ExtReal f = model.dualTerminal(pT, tol);
    if (f.isInfinite()) return kInf;
    return g.value() + f.value() + xT.dot(pT);
}

TrajectoryPair assemblePair(const PrimalModel& model, int tau, const std::vector<Vector>& states,
                            const std::vector<Vector>& costates, const Tolerances& tol) {
    const int K = model.horizon() - tau;
    require(static_cast<int>(states.size()) == K + 1 && static_cast<int>(costates.size()) == K + 1,
            ErrorCode::DimensionMismatch, "trajectory pair: need T - tau + 1 states and costates");
    TrajectoryPair pair;
    pair.tau = tau;
    pair.states = states;
    pair.costates = costates;
    for (int k = 0; k < K; ++k) {
        const auto i = static_cast<std::size_t>(k);
        const Vector dx = states[i + 1] - states[i];
        const Vector dp = costates[i + 1] - costates[i];
        double el = kInf;
        try {
            el = inclusionResidual(model, tau + k, states[i], costates[i + 1], dp, dx, tol);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::InfeasiblePoint) throw;
        }
        pair.elResiduals.push_back(el);
        pair.hamResiduals.push_back(hamiltonianGaps(model, tau + k, states[i], costates[i + 1], dp, dx, tol).total());
    }
    try {
        pair.transversalityResidual = transversalityResidual(model, states.back(), costates.back(), tol);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::InfeasiblePoint) throw;
        pair.transversalityResidual = kInf;
    }
    pair.gap = pair.transversalityResidual;
    for (double r : pair.elResiduals) pair.gap += r;
    pair.status = PairStatus::NotASubgradient;
    return pair;
}

TrajectoryPair buildCharacteristic(const PrimalModel& model, int tau, const Vector& xi, const Vector& eta,
                                   const Tolerances& tol) {
    const SolveResult primal = solvePrimal(model, tau, xi, tol);
    const SolveResult dual = solveDual(model, tau, eta, tol);
    if (!primal.optimal() || !dual.optimal()) {
        TrajectoryPair pair;
        pair.tau = tau;
        pair.states = primal.states;
        pair.costates = dual.states;
        pair.gap = kInf;
        pair.status = PairStatus::SolverFailure;
        return pair;
    }
    TrajectoryPair pair = assemblePair(model, tau, primal.states, dual.states, tol);
    pair.costates.front() = -eta;
    const double theta = primal.value.value();
    const double omega = dual.value.value();
    const double bilinear = xi.dot(eta);
    pair.gap = theta + omega - bilinear;
    const double scale = 1.0 + std::abs(theta) + std::abs(omega) + std::abs(bilinear);
    pair.status = pair.gap <= tol.cert * scale ? PairStatus::Characteristic : PairStatus::NotASubgradient;
    return pair;
}

CharacteristicVerdict verifyCharacteristic(const PrimalModel& model, const TrajectoryPair& pair, const Vector& eta,
                                           const Tolerances& tol) {
    CharacteristicVerdict v;
    const TrajectoryPair fresh = assemblePair(model, pair.tau, pair.states, pair.costates, tol);
    const double startError = infNorm(Vector(pair.costates.front() + eta));
    bool ok = startError <= tol.num * (1.0 + infNorm(eta));
    for (std::size_t k = 0; k < fresh.elResiduals.size(); ++k) {
        const double r = std::max(fresh.elResiduals[k], fresh.hamResiduals[k]);
        v.epsilon += fresh.elResiduals[k];
        v.maxResidual = std::max(v.maxResidual, r);
        const Vector dx = pair.states[k + 1] - pair.states[k];
        const Vector dp = pair.costates[k + 1] - pair.costates[k];
        if (!(r <= tol.cert * stepScale(pair.states[k], pair.costates[k + 1], dp, dx)) && v.failingStep < 0)
            v.failingStep = pair.tau + static_cast<int>(k);
    }
    v.epsilon += fresh.transversalityResidual;
    v.maxResidual = std::max(v.maxResidual, fresh.transversalityResidual);
    const double transScale = 1.0 + std::abs(pair.states.back().dot(pair.costates.back()));
    if (!(fresh.transversalityResidual <= tol.cert * transScale) && v.failingStep < 0)
        v.failingStep = model.horizon();
    v.pass = ok && v.failingStep < 0;
    return v;
}

TrajectoryPair propagateSmooth(const PrimalModel& model, int tau, const Vector& xi, const Vector& eta,
                               const Tolerances& tol) {
    const BolzaProblem& problem = model.problem();
    const int n = problem.stateDim();
    require(tau >= 0 && tau < problem.horizon(), ErrorCode::InvalidArgument, "propagate: tau out of range");
    std::vector<Vector> xs{xi}, ps{-eta};
    for (int t = tau; t < problem.horizon(); ++t) {
        const StageSpec& s = problem.stage(t);
        require(!s.mixed && s.stateSet.isUnconstrained() && s.controlSet.isUnconstrained(),
                ErrorCode::UnsupportedClass, "propagate: needs unconstrained stages");
        require(isPositiveDefinite(s.R, tol.psd), ErrorCode::UnsupportedClass, "propagate: needs R > 0");
        const Matrix F = Matrix::Identity(n, n) + s.A.transpose();
        Eigen::FullPivLU<Matrix> lu(F);
        require(lu.isInvertible(), ErrorCode::UnsupportedClass, "propagate: needs I + A invertible");
        const Vector& x = xs.back();
        const Vector pNext = lu.solve(ps.back() + s.Q * x);
        const Vector xNext = x + s.A * x + s.phi + s.B * s.R.llt().solve(s.B.transpose() * pNext);
        xs.push_back(xNext);
        ps.push_back(pNext);
    }
    TrajectoryPair pair = assemblePair(model, tau, xs, ps, tol);
    const CharacteristicVerdict v = verifyCharacteristic(model, pair, eta, tol);
    pair.status = v.pass ? PairStatus::Characteristic : PairStatus::NotASubgradient;
    return pair;
}

}  // namespace bolza
