#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "bolza/convex_program.hpp"
#include "bolza/convex_set.hpp"
#include "bolza/linalg.hpp"

namespace bolza {

/// Convex real-valued function of the stacked stage pair (x, u).
class MixedFunction {
public:
    enum class Kind { QuadraticAffine, Callable };

    /// 0.5 (x,u)'P(x,u) + q.(x,u) + r with P PSD.
    static MixedFunction quadratic(Matrix P, Vector q, double r);
    /// Black-box convex evaluator; allowed only when n + m <= 4.
    static MixedFunction callable(int dim, std::function<double(const Vector&)> fn);

    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] int dim() const { return fn_->dim(); }
    [[nodiscard]] double operator()(const Vector& x, const Vector& u) const;
    [[nodiscard]] const std::shared_ptr<const SmoothFunction>& function() const { return fn_; }
    /// Quadratic data; only valid for QuadraticAffine.
    [[nodiscard]] const QuadraticFunction& quadraticData() const;

private:
    MixedFunction(Kind kind, std::shared_ptr<const SmoothFunction> fn) : kind_(kind), fn_(std::move(fn)) {}
    Kind kind_;
    std::shared_ptr<const SmoothFunction> fn_;
};

/// Mixed state-control data of a stage: f(x,u) <= 0 and a running cost
/// l(x,u) added to the quadratic stage cost.
struct MixedConstraintSpec {
    std::optional<MixedFunction> constraint;
    std::optional<MixedFunction> runningCost;
};

/// One stage of  x_{t+1} = x_t + A x_t + B u_t + phi  with cost
/// 0.5|x_t|_Q^2 + 0.5|u_t|_R^2, x_t in stateSet, u_t in controlSet.
struct StageSpec {
    Matrix A;
    Matrix B;
    Vector phi;
    Matrix Q;
    Matrix R;
    ConvexSet stateSet;
    ConvexSet controlSet;
    std::optional<MixedConstraintSpec> mixed;

    [[nodiscard]] int n() const { return static_cast<int>(A.rows()); }
    [[nodiscard]] int m() const { return static_cast<int>(B.cols()); }
};

/// g(a) = 0.5 a'Qf a + indicator(set)
struct TerminalCost {
    Matrix Qf;
    ConvexSet set;
};

/// Stage t of the problem holds the data acting on the transition from x_t
/// to x_{t+1}, i.e. the Lagrangian L_t(x_t, x_{t+1} - x_t). See
/// docs/indexing.md for the correspondence with the one-based convention.
class BolzaProblem {
public:
    BolzaProblem(std::vector<StageSpec> stages, TerminalCost terminal);

    [[nodiscard]] int horizon() const { return static_cast<int>(stages_.size()); }
    [[nodiscard]] int stateDim() const { return n_; }
    [[nodiscard]] const StageSpec& stage(int t) const;
    [[nodiscard]] const std::vector<StageSpec>& stages() const { return stages_; }
    [[nodiscard]] const TerminalCost& terminal() const { return terminal_; }

    /// Some stage carries a mixed constraint or running cost.
    [[nodiscard]] bool isMixed() const;
    /// Every state and control set is the whole space and nothing is mixed.
    [[nodiscard]] bool isUnconstrained() const;

private:
    std::vector<StageSpec> stages_;
    TerminalCost terminal_;
    int n_ = 0;
};

/// Convenience builder for scalar or small test instances with free sets.
StageSpec makeStage(Matrix A, Matrix B, Vector phi, Matrix Q, Matrix R);
TerminalCost makeTerminal(Matrix Qf);

}  // namespace bolza
