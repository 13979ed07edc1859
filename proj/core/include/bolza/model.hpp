#pragma once

#include <memory>
#include <vector>

#include "bolza/ext_real.hpp"
#include "bolza/fragment.hpp"
#include "bolza/problem.hpp"
#include "bolza/tolerances.hpp"

namespace bolza {

/// Bolza problem in program form: a Lagrangian L_t(x, v) per stage and a
/// terminal cost g, each a ProgramFragment, together with their conjugates
/// K_t(p, w) = L_t*(w, p) and f(b) = g*(-b) when those have a program form.
class BolzaModel {
public:
    virtual ~BolzaModel() = default;

    [[nodiscard]] int horizon() const { return static_cast<int>(stages_.size()); }
    [[nodiscard]] int stateDim() const { return n_; }
    [[nodiscard]] virtual bool isDualized() const = 0;

    /// Fragment of L_t over (x, v).
    [[nodiscard]] const ProgramFragment& stageFragment(int t) const;
    /// Fragment of K_t over (p, w); throws UnsupportedClass when unavailable.
    [[nodiscard]] const ProgramFragment& conjugateFragment(int t) const;
    [[nodiscard]] bool hasConjugateFragments() const { return !conjugates_.empty(); }
    /// Fragment of g over x.
    [[nodiscard]] const ProgramFragment& terminalFragment() const { return terminal_; }
    /// Fragment of f(b) = g*(-b) over b.
    [[nodiscard]] const ProgramFragment& dualTerminalFragment() const { return dualTerminal_; }

    [[nodiscard]] ProgramFragment::Evaluation lagrangianDetail(int t, const Vector& x, const Vector& v,
                                                               const Tolerances& tol = defaultTolerances()) const;
    [[nodiscard]] ExtReal lagrangian(int t, const Vector& x, const Vector& v,
                                     const Tolerances& tol = defaultTolerances()) const;
    [[nodiscard]] virtual ExtReal dualLagrangian(int t, const Vector& p, const Vector& w,
                                                 const Tolerances& tol = defaultTolerances()) const;
    [[nodiscard]] ExtReal terminal(const Vector& x, const Tolerances& tol = defaultTolerances()) const;
    [[nodiscard]] ExtReal dualTerminal(const Vector& b, const Tolerances& tol = defaultTolerances()) const;

protected:
    int n_ = 0;
    std::vector<ProgramFragment> stages_;
    std::vector<ProgramFragment> conjugates_;
    ProgramFragment terminal_;
    ProgramFragment dualTerminal_;
};

/// The model of a BolzaProblem (LQ or mixed class).
class PrimalModel final : public BolzaModel {
public:
    explicit PrimalModel(BolzaProblem problem);

    [[nodiscard]] bool isDualized() const override { return false; }
    [[nodiscard]] const BolzaProblem& problem() const { return problem_; }

    /// For the mixed class K_t is computed by direct concave maximization.
    [[nodiscard]] ExtReal dualLagrangian(int t, const Vector& p, const Vector& w,
                                         const Tolerances& tol = defaultTolerances()) const override;

private:
    BolzaProblem problem_;
};

/// The dual problem written as a primal one: Lagrangian K_t(p + w, w) and
/// terminal cost f. Dualizing it again gives back the original Lagrangian.
class DualModel final : public BolzaModel {
public:
    explicit DualModel(const BolzaModel& inner);
    [[nodiscard]] bool isDualized() const override { return true; }
};

/// Fragment of y -> sup_{x in set} { x.y - 0.5 x'Qx }.
ProgramFragment quadraticConjugateFragment(const Matrix& Q, const ConvexSet& set);

/// Maps a fragment evaluation to an extended real: Infeasible gives +inf,
/// Unbounded and IterLimit raise ProperNessViolation naming `what`.
ExtReal valueOrThrow(const ProgramFragment::Evaluation& ev, const char* what);

}  // namespace bolza
