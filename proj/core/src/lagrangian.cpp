#include "bolza/lagrangian.hpp"

#include <cmath>
#include <limits>

#include "bolza/errors.hpp"

namespace bolza {

LagrangianValue lagrangianEval(const PrimalModel& model, int t, const Vector& x, const Vector& v,
                               const Tolerances& tol) {
    const auto ev = model.lagrangianDetail(t, x, v, tol);
    LagrangianValue out{valueOrThrow(ev, "lagrangian"), Vector(0)};
    if (out.value.isFinite()) out.control = ev.aux.tail(model.problem().stage(t).m());
    return out;
}

LagrangianSubgradient lagrangianSubgradient(const BolzaModel& model, int t, const Vector& x, const Vector& v,
                                            const Tolerances& tol) {
    const int n = model.stateDim();
    const auto ev = model.lagrangianDetail(t, x, v, tol);
    const ExtReal value = valueOrThrow(ev, "lagrangian");
    require(value.isFinite(), ErrorCode::InfeasiblePoint, "lagrangian is +inf at the requested point");
    Vector z(2 * n);
    z << x, v;
    const Vector g = model.stageFragment(t).minNormSubgradient(z, ev.aux, ev.subgradient, tol);
    LagrangianSubgradient out;
    out.a = g.head(n);
    out.b = g.tail(n);
    const ExtReal k = model.dualLagrangian(t, out.b, out.a, tol);
    out.residual = k.isFinite() ? value.value() + k.value() - (x.dot(out.a) + v.dot(out.b))
                                : std::numeric_limits<double>::infinity();
    return out;
}

ExtReal terminalEval(const BolzaModel& model, const Vector& x, const Tolerances& tol) {
    return model.terminal(x, tol);
}

TerminalSubgradient terminalSubgradient(const BolzaModel& model, const Vector& x, const Tolerances& tol) {
    const auto ev = model.terminalFragment().evaluate(x, tol);
    const ExtReal value = valueOrThrow(ev, "terminal cost");
    require(value.isFinite(), ErrorCode::InfeasiblePoint, "x is outside dom(g)");
    TerminalSubgradient out;
    out.y = model.terminalFragment().minNormSubgradient(x, ev.aux, ev.subgradient, tol);
    const ExtReal conj = model.dualTerminal(-out.y, tol);
    out.residual = conj.isFinite() ? value.value() + conj.value() - x.dot(out.y)
                                   : std::numeric_limits<double>::infinity();
    return out;
}

GammaL gammaL(const BolzaProblem& problem, int t, const Vector& x, const Tolerances& tol) {
    const StageSpec& s = problem.stage(t);
    require(x.size() == s.n(), ErrorCode::DimensionMismatch, "gamma_L: x needs length n");
    GammaL g;
    g.B_ = s.B;
    g.offset_ = s.A * x + s.phi;
    g.x_ = x;
    g.controls_ = s.controlSet;
    if (s.mixed && s.mixed->constraint) g.mixed_ = s.mixed->constraint;
    g.empty_ = !s.stateSet.contains(x, tol.feas);
    if (!g.empty_ && g.mixed_) {
        // The slice {u in U | f(x,u) <= 0} may be empty.
        ConvexProgram p = g.controlProgram(Vector(0));
        ProgramOptions opt;
        opt.tolerance = tol.kkt;
        g.empty_ = solveProgram(p, opt).status == ProgramStatus::Infeasible;
    }
    return g;
}

// Feasibility program over u: u in U, f(x,u) <= 0 and, when v is given, B u = v - offset.
ConvexProgram GammaL::controlProgram(const Vector& v) const {
    const auto m = static_cast<int>(B_.cols());
    ConvexProgram p(m);
    controls_.addConstraintsTo(p, 0);
    if (v.size() > 0) p.addEqualities(B_, v - offset_);
    if (mixed_) {
        SmoothTerm term;
        term.map = Matrix::Zero(x_.size() + m, m);
        term.map.bottomRows(m) = Matrix::Identity(m, m);
        term.offset = Vector::Zero(x_.size() + m);
        term.offset.head(x_.size()) = x_;
        term.fn = mixed_->function();
        p.constraints.push_back(term);
    }
    return p;
}

bool GammaL::contains(const Vector& v, const Tolerances& tol) const {
    if (empty_) return false;
    require(v.size() == offset_.size(), ErrorCode::DimensionMismatch, "gamma_L: v needs length n");
    ProgramOptions opt;
    opt.tolerance = tol.kkt;
    return solveProgram(controlProgram(v), opt).status == ProgramStatus::Optimal;
}

bool GammaL::inRelativeInterior(const Vector& v, const Tolerances& tol) const {
    if (empty_) return false;
    require(v.size() == offset_.size(), ErrorCode::DimensionMismatch, "gamma_L: v needs length n");
    // ri(B S + c) = B ri(S) + c: look for u in ri(S) mapping to v.
    const auto m = static_cast<int>(B_.cols());
    const auto& rows = controls_.inequalityRows();
    const auto k = static_cast<int>(rows.rows());
    ConvexProgram p(m + 1);
    p.c(m) = -1.0;
    if (controls_.equalityRows().rows() > 0) {
        Matrix E = Matrix::Zero(controls_.equalityRows().rows(), m + 1);
        E.leftCols(m) = controls_.equalityRows();
        p.addEqualities(E, controls_.equalityRhs());
    }
    Matrix Bm = Matrix::Zero(B_.rows(), m + 1);
    Bm.leftCols(m) = B_;
    p.addEqualities(Bm, v - offset_);
    Matrix G = Matrix::Zero(k + 1, m + 1);
    G.topLeftCorner(k, m) = rows;
    G.block(0, m, k, 1).setOnes();
    G(k, m) = 1.0;
    Vector h(k + 1);
    h << controls_.inequalityRhs(), 1.0;
    p.addInequalities(G, h);
    if (mixed_) {
        // f(x,u) + s <= 0 keeps the point strictly inside the slice.
        struct Shift final : SmoothFunction {
            std::shared_ptr<const SmoothFunction> f;
            int d = 0;
            [[nodiscard]] int dim() const override { return d + 1; }
            [[nodiscard]] double value(const Vector& z) const override { return f->value(z.head(d)) + z(d); }
            [[nodiscard]] Vector gradient(const Vector& z) const override {
                Vector g(d + 1);
                g << f->gradient(z.head(d)), 1.0;
                return g;
            }
            [[nodiscard]] Matrix hessian(const Vector& z) const override {
                Matrix H = Matrix::Zero(d + 1, d + 1);
                H.topLeftCorner(d, d) = f->hessian(z.head(d));
                return H;
            }
        };
        auto shifted = std::make_shared<Shift>();
        shifted->f = mixed_->function();
        shifted->d = static_cast<int>(x_.size()) + m;
        SmoothTerm term;
        term.map = Matrix::Zero(shifted->d + 1, m + 1);
        term.map.block(x_.size(), 0, m, m) = Matrix::Identity(m, m);
        term.map(shifted->d, m) = 1.0;
        term.offset = Vector::Zero(shifted->d + 1);
        term.offset.head(x_.size()) = x_;
        term.fn = shifted;
        p.constraints.push_back(term);
    }
    ProgramOptions opt;
    opt.tolerance = tol.kkt;
    ProgramSolution sol = solveProgram(p, opt);
    return sol.status == ProgramStatus::Optimal && sol.w(m) > tol.ri;
}

namespace {

// Eliminates column j of [rows | rhs] by Fourier-Motzkin.
void eliminateColumn(Matrix& rows, Vector& rhs, Eigen::Index j) {
    std::vector<Eigen::Index> pos, neg, zero;
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        const double c = rows(i, j);
        if (c > 1e-12)
            pos.push_back(i);
        else if (c < -1e-12)
            neg.push_back(i);
        else
            zero.push_back(i);
    }
    const auto count = static_cast<Eigen::Index>(zero.size() + pos.size() * neg.size());
    Matrix out(count, rows.cols());
    Vector outRhs(count);
    Eigen::Index k = 0;
    for (auto i : zero) {
        out.row(k) = rows.row(i);
        outRhs(k++) = rhs(i);
    }
    for (auto ip : pos) {
        for (auto in : neg) {
            const double a = rows(ip, j);
            const double b = -rows(in, j);
            out.row(k) = rows.row(ip) / a + rows.row(in) / b;
            outRhs(k++) = rhs(ip) / a + rhs(in) / b;
        }
    }
    out.col(j).setZero();
    rows = std::move(out);
    rhs = std::move(outRhs);
}

}  // namespace

ConvexSet GammaL::asSet() const {
    require(!empty_, ErrorCode::EmptySet, "gamma_L is empty");
    require(!mixed_, ErrorCode::UnsupportedClass, "gamma_L with a mixed slice has no polyhedral form");
    const auto n = static_cast<int>(B_.rows());
    const auto m = static_cast<int>(B_.cols());

    // Diagonal invertible B on a box (or the whole space) maps to a box.
    const bool square = n == m;
    const bool diagonal = square && infNorm(Matrix(B_ - Matrix(B_.diagonal().asDiagonal()))) == 0.0 &&
                          (B_.diagonal().array().abs() > 0.0).all();
    if (diagonal && controls_.kind() != ConvexSet::Kind::Polyhedron) {
        Vector lo(n), hi(n);
        for (int i = 0; i < n; ++i) {
            const double b = B_(i, i);
            double a = b * controls_.lower()(i);
            double c = b * controls_.upper()(i);
            if (b < 0) std::swap(a, c);
            lo(i) = a + offset_(i);
            hi(i) = c + offset_(i);
        }
        if (controls_.kind() == ConvexSet::Kind::WholeSpace) return ConvexSet::wholeSpace(n);
        return ConvexSet::box(lo, hi);
    }

    // u = Vr Sr^{-1} Ur'(v - c) + N beta, plus Uperp'(v - c) = 0.
    Eigen::JacobiSVD<Matrix> svd(B_, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double cut = 1e-12 * std::max(1.0, infNorm(B_));
    int r = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > cut) ++r;
    const Matrix Ur = svd.matrixU().leftCols(r);
    const Matrix Uperp = svd.matrixU().rightCols(n - r);
    const Matrix Vr = svd.matrixV().leftCols(r);
    const Matrix N = svd.matrixV().rightCols(m - r);
    const Matrix W = Vr * svd.singularValues().head(r).cwiseInverse().asDiagonal() * Ur.transpose();  // m x n

    const auto& Ce = controls_.equalityRows();
    const auto& Ci = controls_.inequalityRows();
    Matrix Cu(2 * Ce.rows() + Ci.rows(), m);
    Cu << Ce, -Ce, Ci;
    Vector du(Cu.rows());
    du << controls_.equalityRhs(), -controls_.equalityRhs(), controls_.inequalityRhs();

    Matrix rows(Cu.rows() + 2 * Uperp.cols(), n + (m - r));
    Vector rhs(rows.rows());
    rows.topLeftCorner(Cu.rows(), n) = Cu * W;
    rows.topRightCorner(Cu.rows(), m - r) = Cu * N;
    rhs.head(Cu.rows()) = du + Cu * W * offset_;
    if (Uperp.cols() > 0) {
        rows.bottomLeftCorner(2 * Uperp.cols(), n) << Uperp.transpose(), -Uperp.transpose();
        rows.bottomRightCorner(2 * Uperp.cols(), m - r).setZero();
        rhs.tail(2 * Uperp.cols()) << Uperp.transpose() * offset_, -(Uperp.transpose() * offset_);
    }
    for (int j = 0; j < m - r; ++j) eliminateColumn(rows, rhs, n + j);
    Matrix vRows = rows.leftCols(n);
    // Drop rows that became trivial.
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < vRows.rows(); ++i)
        if (vRows.row(i).norm() > 1e-12) keep.push_back(i);
    if (keep.empty()) return ConvexSet::wholeSpace(n);
    Matrix C(static_cast<Eigen::Index>(keep.size()), n);
    Vector d(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) {
        C.row(static_cast<Eigen::Index>(k)) = vRows.row(keep[k]);
        d(static_cast<Eigen::Index>(k)) = rhs(keep[k]);
    }
    return ConvexSet::polyhedron(C, d);
}

}  // namespace bolza
