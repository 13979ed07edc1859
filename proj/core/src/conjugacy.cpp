#include "bolza/conjugacy.hpp"

#include <utility>

#include "bolza/convex_program.hpp"
#include "bolza/linalg.hpp"

namespace bolza {

bool inConjugateDomain(const Matrix& Q, const ConvexSet& set, const Vector& y, const Tolerances& tol) {
    require(Q.rows() == set.dim() && y.size() == set.dim(), ErrorCode::DimensionMismatch,
            "conjugate: dimensions of Q, set and y differ");
    const Matrix N = symmetricKernelBasis(Q, tol.psd);
    const auto k = static_cast<int>(N.cols());
    if (k == 0) return true;
    const Vector c = N.transpose() * y;
    const double threshold = tol.active * (1.0 + infNorm(y));
    if (set.isUnconstrained()) return infNorm(c) <= threshold;

    // max c.z over the cone {z | N z in set_inf}, |z| <= 1
    const Matrix& Ci = set.inequalityRows();
    const Matrix& Ce = set.equalityRows();
    const Matrix Gi = Ci * N;
    Matrix G(Gi.rows() + 2 * k, k);
    G << Gi, Matrix::Identity(k, k), -Matrix::Identity(k, k);
    Vector h = Vector::Zero(G.rows());
    h.tail(2 * k).setOnes();
    const Matrix E = Ce * N;
    ProgramOptions opt;
    opt.tolerance = tol.kkt;
    ProgramSolution sol = solveLinearProgram(-c, E, Vector::Zero(E.rows()), G, h, opt);
    require(sol.status == ProgramStatus::Optimal, ErrorCode::DegenerateInput,
            "conjugate domain: recession program did not converge");
    return -sol.objective <= threshold;
}

ExtReal conjugateQuadratic(const Matrix& Q, const ConvexSet& set, const Vector& y, const Tolerances& tol) {
    require(Q.rows() == Q.cols() && Q.rows() == set.dim() && y.size() == set.dim(), ErrorCode::DimensionMismatch,
            "conjugate: dimensions of Q, set and y differ");
    if (set.isUnconstrained() && isPositiveDefinite(Q, tol.psd)) {
        Eigen::LLT<Matrix> llt(Q);
        return ExtReal(0.5 * y.dot(llt.solve(y)));
    }
    if (!inConjugateDomain(Q, set, y, tol)) return ExtReal::infinity();

    ConvexProgram prog(set.dim());
    prog.P = Q;
    prog.c = -y;
    set.addConstraintsTo(prog, 0);
    ProgramOptions opt;
    opt.tolerance = tol.kkt;
    ProgramSolution sol = solveProgram(prog, opt);
    switch (sol.status) {
        case ProgramStatus::Optimal: return ExtReal(-sol.objective);
        case ProgramStatus::Unbounded: return ExtReal::infinity();
        case ProgramStatus::Infeasible: fail(ErrorCode::EmptySet, "conjugate: the set is empty");
        case ProgramStatus::IterLimit: break;
    }
    fail(ErrorCode::DegenerateInput, "conjugate: inner program did not converge");
}

ExtReal dualTerminal(const BolzaProblem& problem, const Vector& b, const Tolerances& tol) {
    require(b.size() == problem.stateDim(), ErrorCode::DimensionMismatch, "dual terminal: b needs length n");
    return conjugateQuadratic(problem.terminal().Qf, problem.terminal().set, -b, tol);
}

ExtReal dualLagrangianEval(const BolzaProblem& problem, int t, const Vector& p, const Vector& w,
                           const Tolerances& tol) {
    const int n = problem.stateDim();
    require(p.size() == n && w.size() == n, ErrorCode::DimensionMismatch, "dual lagrangian: p and w need length n");
    const StageSpec& s = problem.stage(t);
    if (s.mixed) return PrimalModel(problem).dualLagrangian(t, p, w, tol);
    ExtReal kx = conjugateQuadratic(s.Q, s.stateSet, s.A.transpose() * p + w, tol);
    if (kx.isInfinite()) return kx;
    return kx + conjugateQuadratic(s.R, s.controlSet, s.B.transpose() * p, tol) + ExtReal(s.phi.dot(p));
}

DualModel dualAsBolza(const BolzaModel& model) { return DualModel(model); }

GammaK::GammaK(const BolzaProblem& problem, int t, Vector p, const Tolerances& tol)
    : problem_(&problem), t_(t), p_(std::move(p)), tol_(tol) {
    require(t >= 0 && t < problem.horizon(), ErrorCode::InvalidArgument, "gamma_K: stage index out of range");
    require(p_.size() == problem.stateDim(), ErrorCode::DimensionMismatch, "gamma_K: p needs length n");
}

bool GammaK::contains(const Vector& w) const {
    require(w.size() == p_.size(), ErrorCode::DimensionMismatch, "gamma_K: w needs length n");
    const StageSpec& s = problem_->stage(t_);
    const Vector q = p_ + w;
    if (s.mixed) {
        try {
            return dualLagrangianEval(*problem_, t_, q, w, tol_).isFinite();
        } catch (const Error& e) {
            if (e.code() == ErrorCode::ProperNessViolation) return false;
            throw;
        }
    }
    return inConjugateDomain(s.Q, s.stateSet, s.A.transpose() * q + w, tol_) &&
           inConjugateDomain(s.R, s.controlSet, s.B.transpose() * q, tol_);
}

namespace {

// Columns spanning the polar of {x in set_inf | Qx = 0} as
//   C'lambda + E'mu + V nu,  lambda >= 0.
struct PolarGenerators {
    Matrix cone;  // columns with nonnegative weights
    Matrix span;  // columns with free weights
};

PolarGenerators polarGenerators(const Matrix& Q, const ConvexSet& set, double psdTol) {
    PolarGenerators g;
    g.cone = set.inequalityRows().transpose();
    const Matrix V = rangeBasis(Q, psdTol);
    const Matrix Et = set.equalityRows().transpose();
    g.span.resize(Q.rows(), V.cols() + Et.cols());
    g.span << V, Et;
    return g;
}

}  // namespace

bool pMembership(const BolzaProblem& problem, int t, const Vector& p, const Tolerances& tol) {
    const StageSpec& s = problem.stage(t);
    require(!s.mixed, ErrorCode::UnsupportedClass, "P membership: not decidable for mixed stages");
    const int n = problem.stateDim();
    const int m = s.m();
    require(p.size() == n, ErrorCode::DimensionMismatch, "P membership: p needs length n");
    const PolarGenerators gx = polarGenerators(s.Q, s.stateSet, tol.psd);
    const PolarGenerators gu = polarGenerators(s.R, s.controlSet, tol.psd);
    const auto cx = static_cast<int>(gx.cone.cols()), sx = static_cast<int>(gx.span.cols());
    const auto cu = static_cast<int>(gu.cone.cols()), su = static_cast<int>(gu.span.cols());

    // Variables: w, lambda_x, nu_x, lambda_u, nu_u, residual slacks (+/-).
    const int rows = n + m;
    const int vars = n + cx + sx + cu + su + 2 * rows;
    ConvexProgram prog(vars);
    Matrix E = Matrix::Zero(rows, vars);
    const Matrix F = s.A.transpose() + Matrix::Identity(n, n);
    int col = 0;
    E.block(0, col, n, n) = F;
    E.block(n, col, m, n) = s.B.transpose();
    col += n;
    E.block(0, col, n, cx) = -gx.cone;
    col += cx;
    E.block(0, col, n, sx) = -gx.span;
    col += sx;
    E.block(n, col, m, cu) = -gu.cone;
    col += cu;
    E.block(n, col, m, su) = -gu.span;
    col += su;
    E.block(0, col, rows, rows) = Matrix::Identity(rows, rows);
    E.block(0, col + rows, rows, rows) = -Matrix::Identity(rows, rows);
    Vector e(rows);
    e << -s.A.transpose() * p, -s.B.transpose() * p;
    prog.addEqualities(E, e);

    std::vector<int> nonneg;
    for (int i = 0; i < cx; ++i) nonneg.push_back(n + i);
    for (int i = 0; i < cu; ++i) nonneg.push_back(n + cx + sx + i);
    for (int i = 0; i < 2 * rows; ++i) nonneg.push_back(col + i);
    Matrix G = Matrix::Zero(static_cast<Eigen::Index>(nonneg.size()), vars);
    for (std::size_t i = 0; i < nonneg.size(); ++i) G(static_cast<Eigen::Index>(i), nonneg[i]) = -1.0;
    prog.addInequalities(G, Vector::Zero(G.rows()));
    prog.c.tail(2 * rows).setOnes();
    // A small ridge keeps the free weights bounded.
    prog.P.diagonal().head(col).setConstant(1e-10);

    ProgramOptions opt;
    opt.tolerance = tol.kkt;
    ProgramSolution sol = solveProgram(prog, opt);
    require(sol.status == ProgramStatus::Optimal, ErrorCode::DegenerateInput,
            "P membership: Farkas program did not converge");
    return sol.w.tail(2 * rows).sum() <= tol.cert * (1.0 + infNorm(p));
}

}  // namespace bolza
