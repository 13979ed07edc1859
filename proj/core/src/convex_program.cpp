#include "bolza/convex_program.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bolza/errors.hpp"

namespace bolza {

// ---------------------------------------------------------------------------
// Smooth functions

Vector SmoothFunction::gradient(const Vector& z) const {
    const int n = dim();
    Vector g(n);
    Vector zp = z;
    for (int i = 0; i < n; ++i) {
        const double step = 1e-6 * std::max(1.0, std::abs(z(i)));
        zp(i) = z(i) + step;
        const double fp = value(zp);
        zp(i) = z(i) - step;
        const double fm = value(zp);
        zp(i) = z(i);
        g(i) = (fp - fm) / (2.0 * step);
    }
    return g;
}

Matrix SmoothFunction::hessian(const Vector& z) const {
    const int n = dim();
    Matrix H(n, n);
    Vector zp = z;
    for (int i = 0; i < n; ++i) {
        const double step = 1e-4 * std::max(1.0, std::abs(z(i)));
        zp(i) = z(i) + step;
        const Vector gp = gradient(zp);
        zp(i) = z(i) - step;
        const Vector gm = gradient(zp);
        zp(i) = z(i);
        H.col(i) = (gp - gm) / (2.0 * step);
    }
    Matrix sym = 0.5 * (H + H.transpose());
    // A convex function has a PSD Hessian; clip the noise finite differences add.
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
    Vector lambda = eig.eigenvalues().cwiseMax(0.0);
    return eig.eigenvectors() * lambda.asDiagonal() * eig.eigenvectors().transpose();
}

QuadraticFunction::QuadraticFunction(Matrix P, Vector q, double r)
    : P_(std::move(P)), q_(std::move(q)), r_(r) {
    require(P_.rows() == P_.cols() && P_.rows() == q_.size(), ErrorCode::DimensionMismatch,
            "quadratic function: P must be square and match q");
    P_ = 0.5 * (P_ + P_.transpose());
}

double QuadraticFunction::value(const Vector& z) const { return 0.5 * z.dot(P_ * z) + q_.dot(z) + r_; }

Vector QuadraticFunction::gradient(const Vector& z) const { return P_ * z + q_; }

Matrix QuadraticFunction::hessian(const Vector& /*z*/) const { return P_; }

CallableFunction::CallableFunction(int dim, std::function<double(const Vector&)> fn)
    : dim_(dim), fn_(std::move(fn)) {
    require(dim_ > 0, ErrorCode::InvalidArgument, "callable function needs a positive dimension");
    require(static_cast<bool>(fn_), ErrorCode::InvalidArgument, "callable function is empty");
}

// ---------------------------------------------------------------------------
// Program container

ConvexProgram::ConvexProgram(int n)
    : P(Matrix::Zero(n, n)), c(Vector::Zero(n)), E(0, n), e(0), G(0, n), h(0) {}

void ConvexProgram::addEqualities(const Matrix& rows, const Vector& rhs) {
    require(rows.cols() == size() && rows.rows() == rhs.size(), ErrorCode::DimensionMismatch,
            "equality block does not match program size");
    Matrix nE(E.rows() + rows.rows(), size());
    nE << E, rows;
    Vector ne(e.size() + rhs.size());
    ne << e, rhs;
    E = std::move(nE);
    e = std::move(ne);
}

void ConvexProgram::addInequalities(const Matrix& rows, const Vector& rhs) {
    require(rows.cols() == size() && rows.rows() == rhs.size(), ErrorCode::DimensionMismatch,
            "inequality block does not match program size");
    Matrix nG(G.rows() + rows.rows(), size());
    nG << G, rows;
    Vector nh(h.size() + rhs.size());
    nh << h, rhs;
    G = std::move(nG);
    h = std::move(nh);
}

void ConvexProgram::grow(int extra) {
    const int n = size();
    const int m = n + extra;
    Matrix nP = Matrix::Zero(m, m);
    nP.topLeftCorner(n, n) = P;
    P = std::move(nP);
    c.conservativeResize(m);
    c.tail(extra).setZero();
    Matrix nE = Matrix::Zero(E.rows(), m);
    nE.leftCols(n) = E;
    E = std::move(nE);
    Matrix nG = Matrix::Zero(G.rows(), m);
    nG.leftCols(n) = G;
    G = std::move(nG);
    for (auto* terms : {&objective, &constraints}) {
        for (auto& t : *terms) {
            Matrix nm = Matrix::Zero(t.map.rows(), m);
            nm.leftCols(n) = t.map;
            t.map = std::move(nm);
        }
    }
}

double ConvexProgram::objectiveValue(const Vector& w) const {
    double v = 0.5 * w.dot(P * w) + c.dot(w) + c0;
    for (const auto& t : objective) v += t.value(w);
    return v;
}

double ConvexProgram::maxViolation(const Vector& w) const {
    double worst = 0.0;
    if (E.rows() > 0) worst = std::max(worst, infNorm(E * w - e));
    if (G.rows() > 0) worst = std::max(worst, (G * w - h).maxCoeff());
    for (const auto& t : constraints) worst = std::max(worst, t.value(w));
    return worst;
}

std::string_view toString(ProgramStatus status) {
    switch (status) {
        case ProgramStatus::Optimal: return "Optimal";
        case ProgramStatus::Infeasible: return "Infeasible";
        case ProgramStatus::Unbounded: return "Unbounded";
        case ProgramStatus::IterLimit: return "IterLimit";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Interior-point method

namespace {

constexpr double kRegularization = 1e-10;
constexpr double kDualRegularization = 1e-13;
constexpr double kDivergence = 1e10;

struct Iterate {
    Vector w, y, z, s;
};

struct Direction {
    Vector dw, dy, dz, ds;
};

struct Residuals {
    Vector rd, re, ri;
    double merit = 0.0;
    double infeasibility = 0.0;
    double complementarity = 0.0;
};

class InteriorPoint {
public:
    InteriorPoint(const ConvexProgram& prog, const ProgramOptions& opt)
        : prog_(prog),
          opt_(opt),
          n_(prog.size()),
          me_(prog.numEqualities()),
          mi_(prog.numInequalities()),
          mn_(static_cast<int>(prog.constraints.size())),
          m_(mi_ + mn_) {
        scaleD_ = 1.0 + infNorm(prog.c);
        scaleE_ = 1.0 + infNorm(prog.e);
        scaleI_ = 1.0 + infNorm(prog.h);
        scaleC_ = std::max({scaleD_, scaleE_, scaleI_});
    }

    ProgramSolution run() {
        Iterate it = initialPoint();
        ProgramSolution sol;
        Residuals res = residuals(it);
        sol.residualHistory.push_back(res.merit);

        int maxIter = opt_.maxIterations > 0 ? opt_.maxIterations : std::max(60, 10 * (n_ + me_ + m_));
        bool converged = res.merit <= opt_.tolerance;
        double checkpoint = res.merit;
        int sinceCheckpoint = 0;
        int iter = 0;
        for (; iter < maxIter && !converged; ++iter) {
            if (infNorm(it.w) > kDivergence || infNorm(it.y) > 1e3 * kDivergence ||
                infNorm(it.z) > 1e3 * kDivergence)
                break;
            Iterate next;
            Residuals nextRes;
            if (!step(it, res, next, nextRes)) break;
            it = std::move(next);
            res = std::move(nextRes);
            sol.residualHistory.push_back(res.merit);
            converged = res.merit <= opt_.tolerance;
            if (res.merit < 0.5 * checkpoint) {
                checkpoint = res.merit;
                sinceCheckpoint = 0;
            } else if (++sinceCheckpoint > 60) {
                break;
            }
        }

        sol.iterations = iter;
        sol.w = it.w;
        sol.eqDual = it.y;
        sol.ineqDual = it.z.head(mi_);
        sol.nlDual = it.z.tail(mn_);
        sol.objective = prog_.objectiveValue(it.w);
        sol.kktResidual = res.merit;
        sol.status = converged ? ProgramStatus::Optimal : ProgramStatus::IterLimit;
        return sol;
    }

private:
    Iterate initialPoint() const {
        Iterate it;
        it.w = Vector::Zero(n_);
        it.y = Vector::Zero(me_);
        it.z = Vector::Ones(m_);
        it.s = Vector::Ones(m_);
        if (m_ > 0) {
            Vector g = inequalityValues(it.w);
            for (int i = 0; i < m_; ++i) it.s(i) = std::max(1.0, -g(i));
        }
        return it;
    }

    Vector inequalityValues(const Vector& w) const {
        Vector g(m_);
        if (mi_ > 0) g.head(mi_) = prog_.G * w - prog_.h;
        for (int j = 0; j < mn_; ++j) g(mi_ + j) = prog_.constraints[static_cast<std::size_t>(j)].value(w);
        return g;
    }

    Matrix inequalityJacobian(const Vector& w) const {
        Matrix J(m_, n_);
        if (mi_ > 0) J.topRows(mi_) = prog_.G;
        for (int j = 0; j < mn_; ++j) {
            const auto& t = prog_.constraints[static_cast<std::size_t>(j)];
            J.row(mi_ + j) = (t.map.transpose() * t.fn->gradient(t.argument(w))).transpose();
        }
        return J;
    }

    Vector objectiveGradient(const Vector& w) const {
        Vector g = prog_.P * w + prog_.c;
        for (const auto& t : prog_.objective) g += t.map.transpose() * t.fn->gradient(t.argument(w));
        return g;
    }

    Matrix lagrangianHessian(const Vector& w, const Vector& z) const {
        Matrix H = prog_.P;
        for (const auto& t : prog_.objective) H += t.map.transpose() * t.fn->hessian(t.argument(w)) * t.map;
        for (int j = 0; j < mn_; ++j) {
            const auto& t = prog_.constraints[static_cast<std::size_t>(j)];
            H += z(mi_ + j) * (t.map.transpose() * t.fn->hessian(t.argument(w)) * t.map);
        }
        return H;
    }

    Residuals residuals(const Iterate& it) const {
        Residuals r;
        r.rd = objectiveGradient(it.w);
        if (me_ > 0) r.rd += prog_.E.transpose() * it.y;
        if (m_ > 0) r.rd += inequalityJacobian(it.w).transpose() * it.z;
        r.re = me_ > 0 ? Vector(prog_.E * it.w - prog_.e) : Vector(0);
        r.ri = m_ > 0 ? Vector(inequalityValues(it.w) + it.s) : Vector(0);
        const double comp = m_ > 0 ? it.s.cwiseProduct(it.z).norm() : 0.0;
        r.infeasibility = std::sqrt(r.rd.squaredNorm() / (scaleD_ * scaleD_) +
                                    r.re.squaredNorm() / (scaleE_ * scaleE_) + r.ri.squaredNorm() / (scaleI_ * scaleI_));
        r.complementarity = comp / scaleC_;
        r.merit = std::hypot(r.infeasibility, r.complementarity);
        if (!std::isfinite(r.merit)) r.merit = std::numeric_limits<double>::infinity();
        return r;
    }

    static double maxStep(const Vector& v, const Vector& dv) {
        double alpha = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < v.size(); ++i)
            if (dv(i) < 0.0) alpha = std::min(alpha, -v(i) / dv(i));
        return alpha;
    }

    struct Factorization {
        Matrix K0;
        Eigen::PartialPivLU<Matrix> lu;
        Matrix J;
    };

    // Unreduced system in (dw, dy, dz); the slack block stays as -S/Z so that
    // nearly active constraints do not swamp the Hessian block.
    Factorization factor(const Iterate& it) const {
        Factorization f;
        f.J = m_ > 0 ? inequalityJacobian(it.w) : Matrix(0, n_);
        Matrix H = lagrangianHessian(it.w, it.z);
        const int dim = n_ + me_ + m_;
        f.K0 = Matrix::Zero(dim, dim);
        f.K0.topLeftCorner(n_, n_) = H;
        if (me_ > 0) {
            f.K0.block(0, n_, n_, me_) = prog_.E.transpose();
            f.K0.block(n_, 0, me_, n_) = prog_.E;
        }
        if (m_ > 0) {
            f.K0.block(0, n_ + me_, n_, m_) = f.J.transpose();
            f.K0.block(n_ + me_, 0, m_, n_) = f.J;
            f.K0.bottomRightCorner(m_, m_).diagonal() = -it.s.cwiseQuotient(it.z);
        }
        Matrix K = f.K0;
        K.topLeftCorner(n_, n_).diagonal().array() += kRegularization * std::max(1.0, infNorm(H));
        K.bottomRightCorner(me_ + m_, me_ + m_).diagonal().array() -= kDualRegularization;
        f.lu.compute(K);
        return f;
    }

    Vector solveRefined(const Factorization& f, const Vector& rhs) const {
        Vector x = f.lu.solve(rhs);
        const double target = 1e-15 * std::max(1.0, infNorm(rhs));
        for (int k = 0; k < 6; ++k) {
            Vector r = rhs - f.K0 * x;
            if (infNorm(r) <= target) break;
            x += f.lu.solve(r);
        }
        return x;
    }

    Direction direction(const Factorization& f, const Iterate& it, const Residuals& res, const Vector& rc) const {
        Direction d;
        Vector rhs(n_ + me_ + m_);
        rhs.head(n_) = -res.rd;
        if (me_ > 0) rhs.segment(n_, me_) = -res.re;
        if (m_ > 0) rhs.tail(m_) = rc.cwiseQuotient(it.z) - res.ri;
        Vector sol = solveRefined(f, rhs);
        d.dw = sol.head(n_);
        d.dy = sol.segment(n_, me_);
        if (m_ > 0) {
            d.dz = sol.tail(m_);
            d.ds = -res.ri - f.J * d.dw;
        } else {
            d.ds = Vector(0);
            d.dz = Vector(0);
        }
        return d;
    }

    bool tryStep(const Iterate& it, const Residuals& res, const Direction& d, Iterate& next,
                 Residuals& nextRes) const {
        double alpha = 1.0;
        if (m_ > 0) alpha = std::min(1.0, 0.995 * std::min(maxStep(it.s, d.ds), maxStep(it.z, d.dz)));
        if (!(alpha > 0.0)) return false;
        for (int k = 0; k < 40 && alpha > 1e-12; ++k) {
            next.w = it.w + alpha * d.dw;
            next.y = it.y + alpha * d.dy;
            next.s = it.s + alpha * d.ds;
            next.z = it.z + alpha * d.dz;
            nextRes = residuals(next);
            if (nextRes.merit <= res.merit) return true;
            // Linear programs started far from feasibility can need a few steps
            // that trade complementarity for feasibility.
            if (nextRes.infeasibility <= (1.0 - 0.5 * alpha) * res.infeasibility &&
                nextRes.complementarity <= 1e2 * std::max(res.complementarity, res.infeasibility))
                return true;
            alpha *= 0.5;
        }
        return false;
    }

    bool step(const Iterate& it, const Residuals& res, Iterate& next, Residuals& nextRes) const {
        Factorization f = factor(it);
        if (m_ == 0) {
            Direction d = direction(f, it, res, Vector(0));
            return tryStep(it, res, d, next, nextRes);
        }
        const double mu = it.s.dot(it.z) / m_;
        Vector rcAff = it.s.cwiseProduct(it.z);
        if (mn_ > 0) {
            // Curvature of smooth constraints makes the affine predictor unreliable.
            Direction plain = direction(f, it, res, rcAff - Vector::Constant(m_, 0.1 * mu));
            return tryStep(it, res, plain, next, nextRes);
        }
        Direction aff = direction(f, it, res, rcAff);
        double alphaAff = std::min(1.0, std::min(maxStep(it.s, aff.ds), maxStep(it.z, aff.dz)));
        double muAff = (it.s + alphaAff * aff.ds).dot(it.z + alphaAff * aff.dz) / m_;
        double sigma = std::clamp(std::pow(muAff / mu, 3.0), 0.0, 1.0);

        Vector rc = rcAff + aff.ds.cwiseProduct(aff.dz) - Vector::Constant(m_, sigma * mu);
        Direction d = direction(f, it, res, rc);
        if (tryStep(it, res, d, next, nextRes)) return true;

        // Corrector rejected: fall back to a plain centred Newton direction.
        Vector rcPlain = rcAff - Vector::Constant(m_, 0.1 * mu);
        Direction plain = direction(f, it, res, rcPlain);
        if (tryStep(it, res, plain, next, nextRes)) return true;
        return tryStep(it, res, aff, next, nextRes);
    }

    const ConvexProgram& prog_;
    ProgramOptions opt_;
    int n_, me_, mi_, mn_, m_;
    double scaleD_, scaleE_, scaleI_, scaleC_;
};

// Phase one: minimize total violation. Always feasible and bounded below.
double phaseOneInfeasibility(const ConvexProgram& prog, const ProgramOptions& opt, bool& ok) {
    const int n = prog.size();
    const int me = prog.numEqualities();
    const int mi = prog.numInequalities();
    const int mn = static_cast<int>(prog.constraints.size());
    const int extra = 2 * me + mi + mn;
    ConvexProgram p1(n + extra);
    p1.c.tail(extra).setOnes();
    if (me > 0) {
        Matrix rows = Matrix::Zero(me, n + extra);
        rows.leftCols(n) = prog.E;
        rows.block(0, n, me, me) = Matrix::Identity(me, me);
        rows.block(0, n + me, me, me) = -Matrix::Identity(me, me);
        p1.addEqualities(rows, prog.e);
    }
    if (mi > 0) {
        Matrix rows = Matrix::Zero(mi, n + extra);
        rows.leftCols(n) = prog.G;
        rows.block(0, n + 2 * me, mi, mi) = -Matrix::Identity(mi, mi);
        p1.addInequalities(rows, prog.h);
    }
    for (int j = 0; j < mn; ++j) {
        const auto& t = prog.constraints[static_cast<std::size_t>(j)];
        // fn(Mw + o) - t_j <= 0 expressed through a shifted term.
        SmoothTerm term;
        term.map = Matrix::Zero(t.map.rows(), n + extra);
        term.map.leftCols(n) = t.map;
        term.offset = t.offset;
        term.fn = t.fn;
        p1.constraints.push_back(term);
    }
    // The smooth constraints need their slack variable subtracted; wrap them.
    if (mn > 0) {
        struct Shifted final : SmoothFunction {
            std::shared_ptr<const SmoothFunction> inner;
            int d;
            [[nodiscard]] int dim() const override { return d + 1; }
            [[nodiscard]] double value(const Vector& z) const override { return inner->value(z.head(d)) - z(d); }
            [[nodiscard]] Vector gradient(const Vector& z) const override {
                Vector g(d + 1);
                g.head(d) = inner->gradient(z.head(d));
                g(d) = -1.0;
                return g;
            }
            [[nodiscard]] Matrix hessian(const Vector& z) const override {
                Matrix H = Matrix::Zero(d + 1, d + 1);
                H.topLeftCorner(d, d) = inner->hessian(z.head(d));
                return H;
            }
        };
        for (int j = 0; j < mn; ++j) {
            auto& term = p1.constraints[static_cast<std::size_t>(j)];
            auto shifted = std::make_shared<Shifted>();
            shifted->inner = term.fn;
            shifted->d = term.fn->dim();
            Matrix map(term.map.rows() + 1, n + extra);
            map.topRows(term.map.rows()) = term.map;
            map.bottomRows(1).setZero();
            map(term.map.rows(), n + 2 * me + mi + j) = 1.0;
            Vector off(term.offset.size() + 1);
            off << term.offset, 0.0;
            term.map = std::move(map);
            term.offset = std::move(off);
            term.fn = shifted;
        }
    }
    Matrix nonneg = Matrix::Zero(extra, n + extra);
    nonneg.rightCols(extra) = -Matrix::Identity(extra, extra);
    p1.addInequalities(nonneg, Vector::Zero(extra));

    ProgramOptions o = opt;
    o.diagnose = false;
    ProgramSolution s = solveProgram(p1, o);
    ok = s.status == ProgramStatus::Optimal;
    return s.objective;
}

// Recession ray: direction d with E d = 0, G d <= 0, along which the objective
// decreases linearly forever. Only decidable for quadratic pieces.
bool hasDescentRay(const ConvexProgram& prog, const ProgramOptions& opt) {
    const int n = prog.size();
    Vector slope = prog.c;
    Matrix flat = prog.P;
    ConvexProgram ray(n);
    for (const auto& t : prog.objective) {
        const auto* q = dynamic_cast<const QuadraticFunction*>(t.fn.get());
        if (q == nullptr) return false;
        Matrix pm = q->P() * t.map;
        Matrix stacked(flat.rows() + pm.rows(), n);
        stacked << flat, pm;
        flat = std::move(stacked);
        slope += t.map.transpose() * (q->P() * t.offset + q->q());
    }
    for (const auto& t : prog.constraints) {
        const auto* q = dynamic_cast<const QuadraticFunction*>(t.fn.get());
        if (q == nullptr) return false;
        ray.addEqualities(q->P() * t.map, Vector::Zero(q->P().rows()));
        Matrix row = (t.map.transpose() * (q->P() * t.offset + q->q())).transpose();
        ray.addInequalities(row, Vector::Zero(1));
    }
    ray.c = slope;
    if (prog.numEqualities() > 0) ray.addEqualities(prog.E, Vector::Zero(prog.numEqualities()));
    if (prog.numInequalities() > 0) ray.addInequalities(prog.G, Vector::Zero(prog.numInequalities()));
    ray.addEqualities(flat, Vector::Zero(flat.rows()));
    ray.addInequalities(Matrix::Identity(n, n), Vector::Ones(n));
    ray.addInequalities(-Matrix::Identity(n, n), Vector::Ones(n));
    ProgramOptions o = opt;
    o.diagnose = false;
    ProgramSolution s = solveProgram(ray, o);
    return s.status == ProgramStatus::Optimal && s.objective < -1e-7 * (1.0 + infNorm(slope));
}

// Active-set refinement of a converged quadratic program. The interior point
// method stops at sqrt(tolerance) accuracy on degenerate problems; solving the
// KKT system of the guessed active set recovers the exact solution. The
// correction is the minimum-norm one, so non-unique solutions stay put.
void polishQuadratic(const ConvexProgram& prog, ProgramSolution& sol) {
    const int n = prog.size();
    const int me = prog.numEqualities();
    const int mi = prog.numInequalities();
    if (mi == 0 && me == 0) return;
    Vector slack = mi > 0 ? Vector(prog.h - prog.G * sol.w) : Vector(0);
    std::vector<int> active;
    for (int i = 0; i < mi; ++i)
        if (slack(i) <= sol.ineqDual(i)) active.push_back(i);
    const int ma = static_cast<int>(active.size());
    const int dim = n + me + ma;
    Matrix K = Matrix::Zero(dim, dim);
    Vector rhs(dim);
    K.topLeftCorner(n, n) = prog.P;
    rhs.head(n) = -prog.c;
    if (me > 0) {
        K.block(0, n, n, me) = prog.E.transpose();
        K.block(n, 0, me, n) = prog.E;
        rhs.segment(n, me) = prog.e;
    }
    Vector x0(dim);
    x0.head(n) = sol.w;
    x0.segment(n, me) = sol.eqDual;
    for (int k = 0; k < ma; ++k) {
        const int i = active[static_cast<std::size_t>(k)];
        K.block(0, n + me + k, n, 1) = prog.G.row(i).transpose();
        K.block(n + me + k, 0, 1, n) = prog.G.row(i);
        rhs(n + me + k) = prog.h(i);
        x0(n + me + k) = sol.ineqDual(i);
    }
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(K);
    Vector r0 = rhs - K * x0;
    Vector x = x0 + cod.solve(r0);
    const double scale = 1.0 + infNorm(rhs);
    if (!x.allFinite() || infNorm(rhs - K * x) > 1e-12 * scale) return;

    Vector w = x.head(n);
    Vector z = Vector::Zero(mi);
    for (int k = 0; k < ma; ++k) {
        const double zk = x(n + me + k);
        if (zk < -1e-12 * scale) return;
        z(active[static_cast<std::size_t>(k)]) = std::max(0.0, zk);
    }
    if (mi > 0 && (prog.G * w - prog.h).maxCoeff() > 1e-12 * scale) return;
    if (prog.objectiveValue(w) > sol.objective + 1e-12 * (1.0 + std::abs(sol.objective))) return;
    sol.w = std::move(w);
    sol.eqDual = x.segment(n, me);
    sol.ineqDual = std::move(z);
    sol.objective = prog.objectiveValue(sol.w);
}

}  // namespace

ProgramSolution solveProgram(const ConvexProgram& program, const ProgramOptions& options) {
    const int n = program.size();
    require(program.P.rows() == n && program.P.cols() == n, ErrorCode::DimensionMismatch, "program: P size");
    require(program.E.cols() == n && program.G.cols() == n, ErrorCode::DimensionMismatch,
            "program: constraint width");

    InteriorPoint ipm(program, options);
    ProgramSolution sol = ipm.run();
    if (sol.status == ProgramStatus::Optimal) {
        if (program.isQuadratic()) polishQuadratic(program, sol);
        return sol;
    }
    if (!options.diagnose) return sol;

    bool ok = false;
    const double violation = phaseOneInfeasibility(program, options, ok);
    const double scale = 1.0 + infNorm(program.e) + infNorm(program.h);
    if (ok && violation > options.feasibilityTolerance * scale) {
        sol.status = ProgramStatus::Infeasible;
        return sol;
    }
    if (hasDescentRay(program, options)) {
        sol.status = ProgramStatus::Unbounded;
        return sol;
    }
    // Iterates blew up without a linear descent ray: with smooth constraints
    // this is how unboundedness shows (the recession test above is partial).
    if (!program.isQuadratic() && infNorm(sol.w) > kDivergence) sol.status = ProgramStatus::Unbounded;
    return sol;
}

ProgramSolution solveLinearProgram(const Vector& c, const Matrix& E, const Vector& e, const Matrix& G,
                                   const Vector& h, const ProgramOptions& options) {
    ConvexProgram p(static_cast<int>(c.size()));
    p.c = c;
    if (E.rows() > 0) p.addEqualities(E, e);
    if (G.rows() > 0) p.addInequalities(G, h);
    return solveProgram(p, options);
}

}  // namespace bolza
