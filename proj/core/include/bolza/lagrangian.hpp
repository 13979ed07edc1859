#pragma once

#include <optional>

#include "bolza/convex_set.hpp"
#include "bolza/ext_real.hpp"
#include "bolza/model.hpp"
#include "bolza/problem.hpp"
#include "bolza/tolerances.hpp"

namespace bolza {

struct LagrangianValue {
    ExtReal value;
    /// Minimizing control of the inner problem; empty when value is +inf.
    Vector control;
};

/// L_t(x, v) with the attaining control. Throws ProperNessViolation when the
/// inner infimum is -inf or not attained.
LagrangianValue lagrangianEval(const PrimalModel& model, int t, const Vector& x, const Vector& v,
                               const Tolerances& tol = defaultTolerances());

struct LagrangianSubgradient {
    Vector a;  // x-slot
    Vector b;  // v-slot
    /// L(x,v) + K(b,a) - (x.a + v.b); nonnegative, small on subgradients.
    double residual = 0.0;
};

/// Minimum-norm element (a, b) of dL_t(x, v). Works on primal and dualized
/// models alike. Throws InfeasiblePoint when L_t(x, v) = +inf.
LagrangianSubgradient lagrangianSubgradient(const BolzaModel& model, int t, const Vector& x, const Vector& v,
                                            const Tolerances& tol = defaultTolerances());

ExtReal terminalEval(const BolzaModel& model, const Vector& x, const Tolerances& tol = defaultTolerances());

struct TerminalSubgradient {
    Vector y;
    /// g(x) + g*(y) - x.y
    double residual = 0.0;
};

/// Minimum-norm element of dg(x). Throws InfeasiblePoint outside dom(g).
TerminalSubgradient terminalSubgradient(const BolzaModel& model, const Vector& x,
                                        const Tolerances& tol = defaultTolerances());

/// Feasible-velocity set Gamma_L(t, x) = B (U ∩ {u | f(x,u) <= 0}) + A x + phi,
/// empty when x is outside the state set or the mixed slice is empty.
class GammaL {
public:
    [[nodiscard]] bool isEmpty() const { return empty_; }
    [[nodiscard]] const Matrix& B() const { return B_; }
    [[nodiscard]] const Vector& offset() const { return offset_; }
    [[nodiscard]] const ConvexSet& controlSet() const { return controls_; }
    [[nodiscard]] bool hasMixedSlice() const { return mixed_.has_value(); }

    [[nodiscard]] bool contains(const Vector& v, const Tolerances& tol = defaultTolerances()) const;
    [[nodiscard]] bool inRelativeInterior(const Vector& v, const Tolerances& tol = defaultTolerances()) const;
    /// H-representation of the image (LQ class only).
    [[nodiscard]] ConvexSet asSet() const;

private:
    friend GammaL gammaL(const BolzaProblem& problem, int t, const Vector& x, const Tolerances& tol);
    [[nodiscard]] ConvexProgram controlProgram(const Vector& v) const;

    bool empty_ = true;
    Matrix B_;
    Vector offset_;
    Vector x_;
    ConvexSet controls_;
    std::optional<MixedFunction> mixed_;
};

GammaL gammaL(const BolzaProblem& problem, int t, const Vector& x, const Tolerances& tol = defaultTolerances());

}  // namespace bolza
