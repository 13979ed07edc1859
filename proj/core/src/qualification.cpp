#include "bolza/qualification.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "bolza/convex_program.hpp"
#include "bolza/lagrangian.hpp"
#include "bolza/linalg.hpp"

namespace bolza {

std::string_view toString(Condition c) {
    switch (c) {
        case Condition::CQ: return "CQ";
        case Condition::H: return "H";
        case Condition::Hprime: return "Hprime";
        case Condition::Amix: return "Amix";
        case Condition::Bmix: return "Bmix";
    }
    return "?";
}

std::string_view toString(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "Holds";
        case Verdict::Fails: return "Fails";
        case Verdict::Undecided: return "Undecided";
    }
    return "?";
}

bool relativeInteriorMembership(const ConvexSet& set, const Vector& z, const Tolerances& tol) {
    return set.inRelativeInterior(z, tol.ri);
}

QualificationReport checkCQ(const StageSpec& stage, const Tolerances& tol) {
    QualificationReport r;
    r.condition = Condition::CQ;
    const int m = stage.m();
    Matrix stacked(stage.B.rows() + stage.R.rows(), m);
    stacked << stage.B, stage.R;
    const Matrix N = kernelBasis(stacked, tol.psd);
    const auto k = static_cast<int>(N.cols());
    if (k == 0) {
        r.verdict = Verdict::Holds;
        r.reasonCode = "kernel-trivial";
        return r;
    }
    // Is {z | N z in U_inf} = {0}? Probe every coordinate direction.
    const ConvexSet& U = stage.controlSet;
    const Matrix Gi = U.inequalityRows() * N;
    Matrix G(Gi.rows() + 2 * k, k);
    G << Gi, Matrix::Identity(k, k), -Matrix::Identity(k, k);
    Vector h = Vector::Zero(G.rows());
    h.tail(2 * k).setOnes();
    const Matrix E = U.equalityRows() * N;
    ProgramOptions opt;
    opt.tolerance = tol.kkt;
    for (int i = 0; i < k; ++i) {
        for (double sign : {1.0, -1.0}) {
            Vector c = Vector::Zero(k);
            c(i) = -sign;
            ProgramSolution sol = solveLinearProgram(c, E, Vector::Zero(E.rows()), G, h, opt);
            require(sol.status == ProgramStatus::Optimal, ErrorCode::DegenerateInput,
                    "CQ: recession program did not converge");
            if (-sol.objective > tol.active) {
                r.verdict = Verdict::Fails;
                r.reasonCode = "nonzero-recession-ray";
                r.witness.push_back(N * sol.w);
                return r;
            }
        }
    }
    r.verdict = Verdict::Holds;
    r.reasonCode = "recession-trivial";
    return r;
}

namespace {

// f(z.head(d)) + z(d)
class ShiftedFunction final : public SmoothFunction {
public:
    ShiftedFunction(std::shared_ptr<const SmoothFunction> inner, int d) : inner_(std::move(inner)), d_(d) {}
    [[nodiscard]] int dim() const override { return d_ + 1; }
    [[nodiscard]] double value(const Vector& z) const override { return inner_->value(z.head(d_)) + z(d_); }
    [[nodiscard]] Vector gradient(const Vector& z) const override {
        Vector g(d_ + 1);
        g.head(d_) = inner_->gradient(z.head(d_));
        g(d_) = 1.0;
        return g;
    }
    [[nodiscard]] Matrix hessian(const Vector& z) const override {
        Matrix H = Matrix::Zero(d_ + 1, d_ + 1);
        H.topLeftCorner(d_, d_) = inner_->hessian(z.head(d_));
        return H;
    }

private:
    std::shared_ptr<const SmoothFunction> inner_;
    int d_;
};

// z in set with slack s on every inequality row, z = w.segment(offset, dim).
void addSlackConstraints(ConvexProgram& prog, const ConvexSet& set, int offset, int slackIndex) {
    const int total = prog.size();
    const auto ke = set.equalityRows().rows();
    const auto ki = set.inequalityRows().rows();
    if (ke > 0) {
        Matrix rows = Matrix::Zero(ke, total);
        rows.middleCols(offset, set.dim()) = set.equalityRows();
        prog.addEqualities(rows, set.equalityRhs());
    }
    if (ki > 0) {
        Matrix rows = Matrix::Zero(ki, total);
        rows.middleCols(offset, set.dim()) = set.inequalityRows();
        rows.col(slackIndex).setOnes();
        prog.addInequalities(rows, set.inequalityRhs());
    }
}

}  // namespace

EqSysResult solveEqSys(const BolzaProblem& problem, const Tolerances& tol) {
    const int n = problem.stateDim();
    const int T = problem.horizon();
    std::vector<int> uOffset;
    int total = (T + 1) * n;
    for (int t = 0; t < T; ++t) {
        uOffset.push_back(total);
        total += problem.stage(t).m();
    }
    const int s = total++;
    ConvexProgram prog(total);
    prog.c(s) = -1.0;
    // A tiny ridge keeps the free coordinates of the trajectory bounded.
    prog.P.diagonal().head(s).setConstant(1e-9);
    for (int t = 0; t < T; ++t) {
        const StageSpec& st = problem.stage(t);
        const int m = st.m();
        const int u = uOffset[static_cast<std::size_t>(t)];
        Matrix dyn = Matrix::Zero(n, total);
        dyn.block(0, (t + 1) * n, n, n) = Matrix::Identity(n, n);
        dyn.block(0, t * n, n, n) = -(Matrix::Identity(n, n) + st.A);
        dyn.block(0, u, n, m) = -st.B;
        prog.addEqualities(dyn, st.phi);
        addSlackConstraints(prog, st.stateSet, t * n, s);
        addSlackConstraints(prog, st.controlSet, u, s);
        if (st.mixed && st.mixed->constraint) {
            Matrix map = Matrix::Zero(n + m + 1, total);
            map.block(0, t * n, n, n) = Matrix::Identity(n, n);
            map.block(n, u, m, m) = Matrix::Identity(m, m);
            map(n + m, s) = 1.0;
            prog.constraints.push_back(SmoothTerm{
                map, Vector::Zero(n + m + 1), std::make_shared<ShiftedFunction>(st.mixed->constraint->function(), n + m)});
        }
    }
    addSlackConstraints(prog, problem.terminal().set, T * n, s);
    Matrix cap = Matrix::Zero(1, total);
    cap(0, s) = 1.0;
    prog.addInequalities(cap, vec({1.0}));

    ProgramOptions opt;
    opt.tolerance = tol.kkt;
    opt.feasibilityTolerance = tol.feas;
    ProgramSolution sol = solveProgram(prog, opt);
    EqSysResult r;
    if (sol.status != ProgramStatus::Optimal) return r;
    r.slack = sol.w(s);
    r.feasible = r.slack >= -tol.feas;
    for (int t = 0; t <= T; ++t) r.states.push_back(sol.w.segment(t * n, n));
    for (int t = 0; t < T; ++t)
        r.controls.push_back(sol.w.segment(uOffset[static_cast<std::size_t>(t)], problem.stage(t).m()));
    return r;
}

QualificationReport checkH(const BolzaProblem& problem, const Tolerances& tol) {
    QualificationReport r;
    r.condition = Condition::H;
    const EqSysResult eq = solveEqSys(problem, tol);
    if (!eq.feasible) {
        r.verdict = Verdict::Fails;
        r.reasonCode = "eq-sys-infeasible";
        return r;
    }
    if (eq.slack <= tol.ri) {
        r.verdict = Verdict::Fails;
        r.reasonCode = "no-strictly-feasible-trajectory";
        return r;
    }
    r.witness = eq.states;
    r.witnessControls = eq.controls;
    const int T = problem.horizon();
    bool ok = relativeInteriorMembership(problem.terminal().set, eq.states.back(), tol);
    for (int t = 0; t < T && ok; ++t) {
        const auto i = static_cast<std::size_t>(t);
        ok = relativeInteriorMembership(problem.stage(t).stateSet, eq.states[i], tol) &&
             gammaL(problem, t, eq.states[i], tol).inRelativeInterior(eq.states[i + 1] - eq.states[i], tol);
    }
    r.verdict = ok ? Verdict::Holds : Verdict::Undecided;
    r.reasonCode = ok ? "eq-sys-witness" : "witness-failed-ri-recheck";
    return r;
}

QualificationReport checkHprime(const BolzaProblem& problem, const Tolerances& tol) {
    QualificationReport r;
    r.condition = Condition::Hprime;
    const int n = problem.stateDim();
    bool anyStrong = false, anyFree = false, anyOther = false;
    for (const auto& st : problem.stages()) {
        std::string code;
        if (st.mixed) {
            code = "mixed";
        } else if (isPositiveDefinite(st.Q, tol.psd) || st.stateSet.isCompact()) {
            code = "i";
        } else if ((isPositiveDefinite(st.R, tol.psd) || st.controlSet.isCompact()) &&
                   numericalRank(st.A.transpose() + Matrix::Identity(n, n), tol.psd) == n) {
            code = "ii";
        } else if (st.stateSet.isUnconstrained() && st.controlSet.isUnconstrained()) {
            code = "iii";
        } else {
            code = "none";
        }
        anyStrong = anyStrong || code == "i" || code == "ii";
        anyFree = anyFree || code == "iii";
        anyOther = anyOther || code == "none" || code == "mixed";
        r.stageReasons.push_back(code);
    }
    if (anyOther || (anyStrong && anyFree)) {
        r.verdict = Verdict::Undecided;
        r.reasonCode = anyOther ? "no-matching-subcase" : "mixed-subcases";
        return r;
    }
    r.verdict = Verdict::Holds;
    r.witness.assign(static_cast<std::size_t>(problem.horizon() + 1), Vector::Zero(n));
    if (anyFree) {
        r.reasonCode = "iii";
    } else {
        const bool allI = std::all_of(r.stageReasons.begin(), r.stageReasons.end(), [](const auto& c) { return c == "i"; });
        const bool allII = std::all_of(r.stageReasons.begin(), r.stageReasons.end(), [](const auto& c) { return c == "ii"; });
        r.reasonCode = allI ? "i" : allII ? "ii" : "i+ii";
    }
    return r;
}

namespace {

struct Sampler {
    std::mt19937_64 rng;
    double radius;

    Vector draw(const ConvexSet& set) {
        Vector z(set.dim());
        for (int i = 0; i < set.dim(); ++i) {
            double lo = -radius, hi = radius;
            if (set.kind() == ConvexSet::Kind::Box) {
                lo = std::max(lo, set.lower()(i));
                hi = std::min(hi, set.upper()(i));
            }
            if (hi < lo) hi = lo;
            z(i) = std::uniform_real_distribution<double>(lo, std::nextafter(hi, INFINITY))(rng);
        }
        return z;
    }

    Vector drawCube(int dim, double r) {
        Vector z(dim);
        for (int i = 0; i < dim; ++i) z(i) = std::uniform_real_distribution<double>(-r, r)(rng);
        return z;
    }
};

bool inOmega(const StageSpec& st, const Vector& x, const Vector& u, const Tolerances& tol) {
    if (!st.stateSet.contains(x, tol.feas) || !st.controlSet.contains(u, tol.feas)) return false;
    return !(st.mixed && st.mixed->constraint) || (*st.mixed->constraint)(x, u) <= 0.0;
}

template <typename Fn>
const Fn& pick(const std::vector<Fn>& fns, int t) {
    return fns.size() == 1 ? fns.front() : fns.at(static_cast<std::size_t>(t));
}

}  // namespace

std::vector<QualificationReport> checkMixedCertificates(const BolzaProblem& problem, const CertificateInput& certs,
                                                        const Tolerances& tol) {
    QualificationReport a, b;
    a.condition = Condition::Amix;
    b.condition = Condition::Bmix;
    const int T = problem.horizon();
    const int perStage = std::max(1, certs.budget / std::max(1, T));

    if (certs.psi.empty()) {
        a.reasonCode = "no-certificate";
    } else {
        Sampler sampler{std::mt19937_64(certs.seed), certs.sampleRadius};
        for (int t = 0; t < T && !a.counterexample; ++t) {
            const StageSpec& st = problem.stage(t);
            const auto& psi = pick(certs.psi, t);
            for (int k = 0; k < perStage; ++k) {
                const Vector x = sampler.draw(st.stateSet), u = sampler.draw(st.controlSet);
                if (!inOmega(st, x, u, tol)) continue;
                if (u.norm() > psi(x) + tol.num) {
                    a.counterexample = std::vector<Vector>{vec({double(t)}), x, u};
                    break;
                }
            }
        }
        a.verdict = a.counterexample ? Verdict::Fails : Verdict::Undecided;
        a.reasonCode = a.counterexample ? "counterexample" : "no-counterexample-in-budget";
    }

    if (certs.h.empty()) {
        b.reasonCode = "no-certificate";
    } else {
        Sampler sampler{std::mt19937_64(certs.seed + 1), certs.sampleRadius};
        for (int t = 0; t < T && !b.counterexample; ++t) {
            const StageSpec& st = problem.stage(t);
            const auto& h = pick(certs.h, t);
            for (int k = 0; k < perStage; ++k) {
                const Vector z = sampler.drawCube(st.m(), 0.5 * certs.sampleRadius);
                const Vector x = sampler.draw(st.stateSet), u = sampler.draw(st.controlSet);
                if (!inOmega(st, x, u, tol)) continue;
                const double ell = st.mixed && st.mixed->runningCost ? (*st.mixed->runningCost)(x, u) : 0.0;
                if (ell - z.dot(u) <= certs.kappa0 && x.norm() > h(z) + tol.num) {
                    b.counterexample = std::vector<Vector>{vec({double(t)}), x, u, z};
                    break;
                }
            }
        }
        b.verdict = b.counterexample ? Verdict::Fails : Verdict::Undecided;
        b.reasonCode = b.counterexample ? "counterexample" : "no-counterexample-in-budget";
    }
    return {a, b};
}

}  // namespace bolza
