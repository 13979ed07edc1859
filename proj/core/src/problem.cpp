#include "bolza/problem.hpp"

#include "bolza/errors.hpp"
#include "bolza/tolerances.hpp"

namespace bolza {

MixedFunction MixedFunction::quadratic(Matrix P, Vector q, double r) {
    require(isSymmetricPsd(P, defaultTolerances().psd), ErrorCode::NotPsd, "mixed quadratic matrix is not PSD");
    return {Kind::QuadraticAffine, std::make_shared<QuadraticFunction>(std::move(P), std::move(q), r)};
}

MixedFunction MixedFunction::callable(int dim, std::function<double(const Vector&)> fn) {
    require(dim <= 4, ErrorCode::UnsupportedClass, "callable mixed functions need n + m <= 4");
    return {Kind::Callable, std::make_shared<CallableFunction>(dim, std::move(fn))};
}

double MixedFunction::operator()(const Vector& x, const Vector& u) const {
    Vector z(x.size() + u.size());
    z << x, u;
    return fn_->value(z);
}

const QuadraticFunction& MixedFunction::quadraticData() const {
    require(kind_ == Kind::QuadraticAffine, ErrorCode::UnsupportedClass, "mixed function is not quadratic");
    return static_cast<const QuadraticFunction&>(*fn_);
}

namespace {

void validateStage(const StageSpec& s, int n, int t) {
    const std::string where = "stage " + std::to_string(t) + ": ";
    const double tol = defaultTolerances().psd;
    require(s.A.rows() == n && s.A.cols() == n, ErrorCode::DimensionMismatch, where + "A must be n x n");
    require(s.B.rows() == n && s.B.cols() >= 1, ErrorCode::DimensionMismatch, where + "B must be n x m");
    require(s.phi.size() == n, ErrorCode::DimensionMismatch, where + "phi must have length n");
    require(s.Q.rows() == n && s.Q.cols() == n, ErrorCode::DimensionMismatch, where + "Q must be n x n");
    require(s.R.rows() == s.m() && s.R.cols() == s.m(), ErrorCode::DimensionMismatch, where + "R must be m x m");
    require(s.stateSet.dim() == n, ErrorCode::DimensionMismatch, where + "state set dimension");
    require(s.controlSet.dim() == s.m(), ErrorCode::DimensionMismatch, where + "control set dimension");
    require(s.A.allFinite() && s.B.allFinite() && s.phi.allFinite(), ErrorCode::InvalidArgument,
            where + "dynamics must be finite");
    require(isSymmetricPsd(s.Q, tol), ErrorCode::NotPsd, where + "Q is not symmetric PSD");
    require(isSymmetricPsd(s.R, tol), ErrorCode::NotPsd, where + "R is not symmetric PSD");
    if (s.mixed) {
        for (const auto* f : {&s.mixed->constraint, &s.mixed->runningCost})
            if (f->has_value())
                require((*f)->dim() == n + s.m(), ErrorCode::DimensionMismatch,
                        where + "mixed function must act on (x,u)");
    }
}

}  // namespace

BolzaProblem::BolzaProblem(std::vector<StageSpec> stages, TerminalCost terminal)
    : stages_(std::move(stages)), terminal_(std::move(terminal)) {
    require(!stages_.empty(), ErrorCode::InvalidArgument, "horizon must be positive");
    n_ = static_cast<int>(stages_.front().A.rows());
    require(n_ > 0, ErrorCode::DimensionMismatch, "state dimension must be positive");
    for (int t = 0; t < horizon(); ++t) validateStage(stages_[static_cast<std::size_t>(t)], n_, t);
    require(terminal_.Qf.rows() == n_ && terminal_.Qf.cols() == n_, ErrorCode::DimensionMismatch,
            "terminal Qf must be n x n");
    require(terminal_.set.dim() == n_, ErrorCode::DimensionMismatch, "terminal set dimension");
    require(isSymmetricPsd(terminal_.Qf, defaultTolerances().psd), ErrorCode::NotPsd, "Qf is not symmetric PSD");
}

const StageSpec& BolzaProblem::stage(int t) const {
    require(t >= 0 && t < horizon(), ErrorCode::InvalidArgument, "stage index out of range");
    return stages_[static_cast<std::size_t>(t)];
}

bool BolzaProblem::isMixed() const {
    for (const auto& s : stages_)
        if (s.mixed && (s.mixed->constraint || s.mixed->runningCost)) return true;
    return false;
}

bool BolzaProblem::isUnconstrained() const {
    if (isMixed() || !terminal_.set.isUnconstrained()) return false;
    for (const auto& s : stages_)
        if (!s.stateSet.isUnconstrained() || !s.controlSet.isUnconstrained()) return false;
    return true;
}

StageSpec makeStage(Matrix A, Matrix B, Vector phi, Matrix Q, Matrix R) {
    const auto n = static_cast<int>(A.rows());
    const auto m = static_cast<int>(B.cols());
    StageSpec s{std::move(A), std::move(B), std::move(phi), std::move(Q), std::move(R),
                ConvexSet::wholeSpace(n), ConvexSet::wholeSpace(m), std::nullopt};
    return s;
}

TerminalCost makeTerminal(Matrix Qf) {
    const auto n = static_cast<int>(Qf.rows());
    return TerminalCost{std::move(Qf), ConvexSet::wholeSpace(n)};
}

}  // namespace bolza
