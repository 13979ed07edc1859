#include "bolza/fragment.hpp"

#include "bolza/errors.hpp"

namespace bolza {

void embedProgram(ConvexProgram& big, const ConvexProgram& part, const Matrix& T, const Vector& t0) {
    require(T.rows() == part.size() && T.cols() == big.size() && t0.size() == part.size(),
            ErrorCode::DimensionMismatch, "embedding map has the wrong shape");
    const Matrix PT = part.P * T;
    big.P += T.transpose() * PT;
    big.c += T.transpose() * (part.c + part.P * t0);
    big.c0 += part.c0 + part.c.dot(t0) + 0.5 * t0.dot(part.P * t0);
    if (part.numEqualities() > 0) big.addEqualities(part.E * T, part.e - part.E * t0);
    if (part.numInequalities() > 0) big.addInequalities(part.G * T, part.h - part.G * t0);
    for (const auto* src : {&part.objective, &part.constraints}) {
        auto& dst = src == &part.objective ? big.objective : big.constraints;
        for (const auto& term : *src) {
            SmoothTerm t;
            t.map = term.map * T;
            t.offset = term.offset + term.map * t0;
            t.fn = term.fn;
            dst.push_back(std::move(t));
        }
    }
}

void embedProgram(ConvexProgram& big, const ConvexProgram& part, const Matrix& T) {
    embedProgram(big, part, T, Vector::Zero(part.size()));
}

ProgramFragment::ProgramFragment(int argDim, ConvexProgram program) : argDim_(argDim), program_(std::move(program)) {
    require(argDim_ >= 0 && argDim_ <= program_.size(), ErrorCode::DimensionMismatch,
            "fragment argument exceeds program size");
}

ProgramFragment ProgramFragment::reparametrized(const Matrix& M, const Vector& offset) const {
    require(M.rows() == argDim_ && offset.size() == argDim_, ErrorCode::DimensionMismatch,
            "reparametrization map has the wrong shape");
    const int k = static_cast<int>(M.cols());
    const int a = auxDim();
    Matrix T = Matrix::Zero(argDim_ + a, k + a);
    T.topLeftCorner(argDim_, k) = M;
    T.bottomRightCorner(a, a) = Matrix::Identity(a, a);
    Vector t0 = Vector::Zero(argDim_ + a);
    t0.head(argDim_) = offset;
    ConvexProgram big(k + a);
    embedProgram(big, program_, T, t0);
    return {k, std::move(big)};
}

ProgramFragment ProgramFragment::combine(int argDim,
                                         const std::vector<std::pair<const ProgramFragment*, Matrix>>& parts,
                                         const Vector& linear) {
    int total = argDim;
    for (const auto& [frag, M] : parts) {
        require(M.rows() == frag->argDim() && M.cols() == argDim, ErrorCode::DimensionMismatch,
                "combine: map does not match fragment");
        total += frag->auxDim();
    }
    ConvexProgram big(total);
    int offset = argDim;
    for (const auto& [frag, M] : parts) {
        const int a = frag->auxDim();
        Matrix T = Matrix::Zero(frag->argDim() + a, total);
        T.topLeftCorner(frag->argDim(), argDim) = M;
        T.block(frag->argDim(), offset, a, a) = Matrix::Identity(a, a);
        embedProgram(big, frag->program(), T);
        offset += a;
    }
    require(linear.size() == argDim, ErrorCode::DimensionMismatch, "combine: linear term length");
    big.c.head(argDim) += linear;
    return {argDim, std::move(big)};
}

ConvexProgram ProgramFragment::fixed(const Vector& z) const {
    const int a = auxDim();
    const int n = argDim_;
    const ConvexProgram& p = program_;
    ConvexProgram out(a);
    out.P = p.P.bottomRightCorner(a, a);
    out.c = p.c.tail(a) + p.P.topRightCorner(n, a).transpose() * z;
    out.c0 = p.c0 + p.c.head(n).dot(z) + 0.5 * z.dot(p.P.topLeftCorner(n, n) * z);
    if (p.numEqualities() > 0) out.addEqualities(p.E.rightCols(a), p.e - p.E.leftCols(n) * z);
    if (p.numInequalities() > 0) out.addInequalities(p.G.rightCols(a), p.h - p.G.leftCols(n) * z);
    for (const auto* src : {&p.objective, &p.constraints}) {
        auto& dst = src == &p.objective ? out.objective : out.constraints;
        for (const auto& term : *src) {
            SmoothTerm t;
            t.map = term.map.rightCols(a);
            t.offset = term.offset + term.map.leftCols(n) * z;
            t.fn = term.fn;
            dst.push_back(std::move(t));
        }
    }
    return out;
}

namespace {

// Gradient of the program objective at w.
Vector objectiveGradient(const ConvexProgram& p, const Vector& w) {
    Vector g = p.P * w + p.c;
    for (const auto& t : p.objective) g += t.map.transpose() * t.fn->gradient(t.argument(w));
    return g;
}

}  // namespace

ProgramFragment::Evaluation ProgramFragment::evaluate(const Vector& z, const Tolerances& tol) const {
    require(z.size() == argDim_, ErrorCode::DimensionMismatch, "fragment argument has the wrong length");
    Evaluation ev;
    const int a = auxDim();
    if (a == 0) {
        const double scale = 1.0 + infNorm(z) + infNorm(program_.h) + infNorm(program_.e);
        if (program_.maxViolation(z) > tol.feas * scale) {
            ev.status = ProgramStatus::Infeasible;
            return ev;
        }
        ev.status = ProgramStatus::Optimal;
        ev.value = program_.objectiveValue(z);
        ev.aux = Vector(0);
        ev.subgradient = minNormSubgradient(z, ev.aux, objectiveGradient(program_, z).head(argDim_), tol);
        return ev;
    }
    ProgramOptions opt;
    opt.tolerance = tol.kkt;
    opt.feasibilityTolerance = tol.feas;
    const ConvexProgram inner = fixed(z);
    ProgramSolution sol = solveProgram(inner, opt);
    if (sol.status == ProgramStatus::IterLimit && inner.numInequalities() > 0) {
        // A feasible set without interior (e.g. a control pinned to a bound)
        // stalls the interior-point method; retry with a thin relaxation.
        ConvexProgram relaxed = inner;
        relaxed.h.array() += tol.feas * (1.0 + inner.h.array().abs());
        ProgramSolution retry = solveProgram(relaxed, opt);
        const double scale = 1.0 + infNorm(inner.h) + (inner.numEqualities() > 0 ? infNorm(inner.e) : 0.0);
        if (retry.status == ProgramStatus::Infeasible ||
            (retry.status == ProgramStatus::Optimal && inner.maxViolation(retry.w) <= 2.0 * tol.feas * scale))
            sol = std::move(retry);
    }
    ev.status = sol.status;
    ev.aux = sol.w;
    if (sol.status == ProgramStatus::Infeasible) return ev;
    if (sol.status == ProgramStatus::Unbounded) return ev;
    ev.value = sol.objective;

    Vector w(argDim_ + a);
    w << z, sol.w;
    Vector g = objectiveGradient(program_, w);
    if (program_.numEqualities() > 0) g += program_.E.transpose() * sol.eqDual;
    if (program_.numInequalities() > 0) g += program_.G.transpose() * sol.ineqDual;
    for (std::size_t j = 0; j < program_.constraints.size(); ++j) {
        const auto& t = program_.constraints[j];
        g += sol.nlDual(static_cast<Eigen::Index>(j)) * (t.map.transpose() * t.fn->gradient(t.argument(w)));
    }
    ev.subgradient = g.head(argDim_);
    return ev;
}

Vector ProgramFragment::minNormSubgradient(const Vector& z, const Vector& aux, const Vector& fallback,
                                           const Tolerances& tol) const {
    const ConvexProgram& p = program_;
    const int n = argDim_;
    const int a = auxDim();
    Vector w(n + a);
    w << z, aux;

    std::vector<Eigen::Index> activeLinear;
    for (Eigen::Index i = 0; i < p.G.rows(); ++i)
        if (p.G.row(i).dot(w) - p.h(i) >= -tol.active * (1.0 + std::abs(p.h(i)))) activeLinear.push_back(i);
    std::vector<std::size_t> activeSmooth;
    for (std::size_t j = 0; j < p.constraints.size(); ++j)
        if (p.constraints[j].value(w) >= -tol.active) activeSmooth.push_back(j);

    const int me = p.numEqualities();
    const auto ka = static_cast<int>(activeLinear.size());
    const auto ks = static_cast<int>(activeSmooth.size());
    const int k = me + ka + ks;
    if (k == 0) return objectiveGradient(p, w).head(n);

    Matrix M(n + a, k);
    if (me > 0) M.leftCols(me) = p.E.transpose();
    for (int i = 0; i < ka; ++i) M.col(me + i) = p.G.row(activeLinear[static_cast<std::size_t>(i)]).transpose();
    for (int j = 0; j < ks; ++j) {
        const auto& t = p.constraints[activeSmooth[static_cast<std::size_t>(j)]];
        M.col(me + ka + j) = t.map.transpose() * t.fn->gradient(t.argument(w));
    }
    const Vector g0 = objectiveGradient(p, w);

    // min 0.5|g0_z + M_z theta|^2  s.t.  M_y theta = -g0_y,  theta_ineq >= 0
    ConvexProgram qp(k);
    const Matrix Mz = M.topRows(n);
    qp.P = Mz.transpose() * Mz + 1e-10 * Matrix::Identity(k, k);
    qp.c = Mz.transpose() * g0.head(n);
    qp.c0 = 0.5 * g0.head(n).squaredNorm();
    if (a > 0) qp.addEqualities(M.bottomRows(a), -g0.tail(a));
    if (ka + ks > 0) {
        Matrix G = Matrix::Zero(ka + ks, k);
        G.rightCols(ka + ks) = -Matrix::Identity(ka + ks, ka + ks);
        qp.addInequalities(G, Vector::Zero(ka + ks));
    }
    ProgramOptions opt;
    opt.diagnose = false;
    opt.tolerance = tol.kkt;
    ProgramSolution sol = solveProgram(qp, opt);
    if (sol.status != ProgramStatus::Optimal) return fallback;
    return g0.head(n) + Mz * sol.w;
}

}  // namespace bolza
