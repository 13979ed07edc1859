#include "bolza/model.hpp"

#include <Eigen/Eigenvalues>

#include "bolza/errors.hpp"

namespace bolza {

ExtReal valueOrThrow(const ProgramFragment::Evaluation& ev, const char* what) {
    switch (ev.status) {
        case ProgramStatus::Optimal: return ev.value;
        case ProgramStatus::Infeasible: return ExtReal::infinity();
        case ProgramStatus::Unbounded:
            fail(ErrorCode::ProperNessViolation, std::string(what) + ": inner problem is unbounded below");
        case ProgramStatus::IterLimit:
            fail(ErrorCode::ProperNessViolation, std::string(what) + ": inner infimum is not attained");
    }
    return ExtReal::infinity();
}

namespace {

// Q = V diag(lambda) V' restricted to its range.
void rangeFactor(const Matrix& Q, double tol, Matrix& V, Vector& lambda) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (Q + Q.transpose()));
    const double cut = tol * std::max(1.0, infNorm(Q));
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < Q.rows(); ++i)
        if (eig.eigenvalues()(i) > cut) keep.push_back(i);
    V.resize(Q.rows(), static_cast<Eigen::Index>(keep.size()));
    lambda.resize(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) {
        V.col(static_cast<Eigen::Index>(k)) = eig.eigenvectors().col(keep[k]);
        lambda(static_cast<Eigen::Index>(k)) = eig.eigenvalues()(keep[k]);
    }
}

ProgramFragment primalStageFragment(const StageSpec& s) {
    const int n = s.n();
    const int m = s.m();
    ConvexProgram p(2 * n + m);  // (x, v, u)
    p.P.topLeftCorner(n, n) = s.Q;
    p.P.bottomRightCorner(m, m) = s.R;
    Matrix dyn = Matrix::Zero(n, 2 * n + m);
    dyn.leftCols(n) = -s.A;
    dyn.middleCols(n, n) = Matrix::Identity(n, n);
    dyn.rightCols(m) = -s.B;
    p.addEqualities(dyn, s.phi);
    s.stateSet.addConstraintsTo(p, 0);
    s.controlSet.addConstraintsTo(p, 2 * n);
    if (s.mixed) {
        Matrix pick = Matrix::Zero(n + m, 2 * n + m);
        pick.topLeftCorner(n, n) = Matrix::Identity(n, n);
        pick.bottomRightCorner(m, m) = Matrix::Identity(m, m);
        if (s.mixed->constraint)
            p.constraints.push_back(SmoothTerm{pick, Vector::Zero(n + m), s.mixed->constraint->function()});
        if (s.mixed->runningCost)
            p.objective.push_back(SmoothTerm{pick, Vector::Zero(n + m), s.mixed->runningCost->function()});
    }
    return {2 * n, std::move(p)};
}

ProgramFragment makeTerminalFragment(const TerminalCost& g) {
    const auto n = static_cast<int>(g.Qf.rows());
    ConvexProgram p(n);
    p.P = g.Qf;
    g.set.addConstraintsTo(p, 0);
    return {n, std::move(p)};
}

}  // namespace

ProgramFragment quadraticConjugateFragment(const Matrix& Q, const ConvexSet& set) {
    // sup_x x.y - 0.5 x'Qx - indicator(set)(x)
    //   = min 0.5 s'Lambda s + lambda.d + mu.e  s.t.  V Lambda s + C'lambda + E'mu = y,  lambda >= 0
    const int n = set.dim();
    Matrix V;
    Vector lambda;
    rangeFactor(Q, defaultTolerances().psd, V, lambda);
    const auto r = static_cast<int>(lambda.size());
    const auto ki = static_cast<int>(set.inequalityRows().rows());
    const auto ke = static_cast<int>(set.equalityRows().rows());
    ConvexProgram p(n + r + ki + ke);
    p.P.block(n, n, r, r) = lambda.asDiagonal();
    p.c.segment(n + r, ki) = set.inequalityRhs();
    p.c.segment(n + r + ki, ke) = set.equalityRhs();
    Matrix E(n, n + r + ki + ke);
    E << -Matrix::Identity(n, n), V * lambda.asDiagonal(), set.inequalityRows().transpose(),
        set.equalityRows().transpose();
    p.addEqualities(E, Vector::Zero(n));
    if (ki > 0) {
        Matrix G = Matrix::Zero(ki, n + r + ki + ke);
        G.block(0, n + r, ki, ki) = -Matrix::Identity(ki, ki);
        p.addInequalities(G, Vector::Zero(ki));
    }
    return {n, std::move(p)};
}

const ProgramFragment& BolzaModel::stageFragment(int t) const {
    require(t >= 0 && t < horizon(), ErrorCode::InvalidArgument, "stage index out of range");
    return stages_[static_cast<std::size_t>(t)];
}

const ProgramFragment& BolzaModel::conjugateFragment(int t) const {
    require(hasConjugateFragments(), ErrorCode::UnsupportedClass,
            "dual Lagrangian has no program form for mixed constraints");
    require(t >= 0 && t < horizon(), ErrorCode::InvalidArgument, "stage index out of range");
    return conjugates_[static_cast<std::size_t>(t)];
}

ProgramFragment::Evaluation BolzaModel::lagrangianDetail(int t, const Vector& x, const Vector& v,
                                                         const Tolerances& tol) const {
    require(x.size() == n_ && v.size() == n_, ErrorCode::DimensionMismatch, "lagrangian: x and v need length n");
    Vector z(2 * n_);
    z << x, v;
    return stageFragment(t).evaluate(z, tol);
}

ExtReal BolzaModel::lagrangian(int t, const Vector& x, const Vector& v, const Tolerances& tol) const {
    return valueOrThrow(lagrangianDetail(t, x, v, tol), "lagrangian");
}

ExtReal BolzaModel::dualLagrangian(int t, const Vector& p, const Vector& w, const Tolerances& tol) const {
    require(p.size() == n_ && w.size() == n_, ErrorCode::DimensionMismatch,
            "dual lagrangian: p and w need length n");
    Vector z(2 * n_);
    z << p, w;
    return valueOrThrow(conjugateFragment(t).evaluate(z, tol), "dual lagrangian");
}

ExtReal BolzaModel::terminal(const Vector& x, const Tolerances& tol) const {
    require(x.size() == n_, ErrorCode::DimensionMismatch, "terminal: x needs length n");
    return valueOrThrow(terminal_.evaluate(x, tol), "terminal cost");
}

ExtReal BolzaModel::dualTerminal(const Vector& b, const Tolerances& tol) const {
    require(b.size() == n_, ErrorCode::DimensionMismatch, "dual terminal: b needs length n");
    return valueOrThrow(dualTerminal_.evaluate(b, tol), "dual terminal cost");
}

PrimalModel::PrimalModel(BolzaProblem problem) : problem_(std::move(problem)) {
    n_ = problem_.stateDim();
    const bool mixed = problem_.isMixed();
    for (const auto& s : problem_.stages()) {
        stages_.push_back(primalStageFragment(s));
        if (mixed) continue;
        // K(p,w) = conjX(A'p + w) + conjU(B'p) + phi.p
        const ProgramFragment cx = quadraticConjugateFragment(s.Q, s.stateSet);
        const ProgramFragment cu = quadraticConjugateFragment(s.R, s.controlSet);
        Matrix mx(n_, 2 * n_);
        mx << s.A.transpose(), Matrix::Identity(n_, n_);
        Matrix mu(s.m(), 2 * n_);
        mu << s.B.transpose(), Matrix::Zero(s.m(), n_);
        Vector linear = Vector::Zero(2 * n_);
        linear.head(n_) = s.phi;
        conjugates_.push_back(ProgramFragment::combine(2 * n_, {{&cx, mx}, {&cu, mu}}, linear));
    }
    terminal_ = makeTerminalFragment(problem_.terminal());
    dualTerminal_ = quadraticConjugateFragment(problem_.terminal().Qf, problem_.terminal().set)
                        .reparametrized(-Matrix::Identity(n_, n_), Vector::Zero(n_));
}

ExtReal PrimalModel::dualLagrangian(int t, const Vector& p, const Vector& w, const Tolerances& tol) const {
    if (hasConjugateFragments()) return BolzaModel::dualLagrangian(t, p, w, tol);
    require(p.size() == n_ && w.size() == n_, ErrorCode::DimensionMismatch,
            "dual lagrangian: p and w need length n");
    // sup over Omega_t of x.(w + A'p) + u.B'p - cost(x,u), plus phi.p
    const StageSpec& s = problem_.stage(t);
    const int m = s.m();
    ConvexProgram prog(n_ + m);
    prog.P.topLeftCorner(n_, n_) = s.Q;
    prog.P.bottomRightCorner(m, m) = s.R;
    prog.c.head(n_) = -(w + s.A.transpose() * p);
    prog.c.tail(m) = -(s.B.transpose() * p);
    s.stateSet.addConstraintsTo(prog, 0);
    s.controlSet.addConstraintsTo(prog, n_);
    if (s.mixed) {
        const Matrix id = Matrix::Identity(n_ + m, n_ + m);
        if (s.mixed->constraint)
            prog.constraints.push_back(SmoothTerm{id, Vector::Zero(n_ + m), s.mixed->constraint->function()});
        if (s.mixed->runningCost)
            prog.objective.push_back(SmoothTerm{id, Vector::Zero(n_ + m), s.mixed->runningCost->function()});
    }
    ProgramOptions opt;
    opt.tolerance = tol.kkt;
    ProgramSolution sol = solveProgram(prog, opt);
    switch (sol.status) {
        case ProgramStatus::Optimal: return ExtReal(-sol.objective + s.phi.dot(p));
        case ProgramStatus::Unbounded: return ExtReal::infinity();
        case ProgramStatus::Infeasible:
            fail(ErrorCode::ProperNessViolation, "dual lagrangian: the stage feasible set is empty");
        case ProgramStatus::IterLimit:
            // Divergent iterates without a certificate: the supremum is not attained.
            return ExtReal::infinity();
    }
    return ExtReal::infinity();
}

DualModel::DualModel(const BolzaModel& inner) {
    require(inner.hasConjugateFragments(), ErrorCode::UnsupportedClass,
            "dualization needs a program form of the dual Lagrangian (LQ class)");
    n_ = inner.stateDim();
    const int n = n_;
    Matrix plus(2 * n, 2 * n);
    plus << Matrix::Identity(n, n), Matrix::Identity(n, n), Matrix::Zero(n, n), Matrix::Identity(n, n);
    Matrix minus(2 * n, 2 * n);
    minus << Matrix::Identity(n, n), -Matrix::Identity(n, n), Matrix::Zero(n, n), Matrix::Identity(n, n);
    const Vector zero = Vector::Zero(2 * n);
    for (int t = 0; t < inner.horizon(); ++t) {
        // L~(p,w) = K(p + w, w);  L~*(a,b) = L(b - a, a), so K~(p,w) = L(p - w, w)
        stages_.push_back(inner.conjugateFragment(t).reparametrized(plus, zero));
        conjugates_.push_back(inner.stageFragment(t).reparametrized(minus, zero));
    }
    terminal_ = inner.dualTerminalFragment();
    dualTerminal_ = inner.terminalFragment();
}

}  // namespace bolza
