#pragma once

#include "bolza/convex_set.hpp"
#include "bolza/ext_real.hpp"
#include "bolza/model.hpp"
#include "bolza/problem.hpp"
#include "bolza/tolerances.hpp"

namespace bolza {

/// sup_{x in set} { x.y - 0.5 x'Qx }. Closed form when Q is positive definite
/// and the set is the whole space, a concave program otherwise.
ExtReal conjugateQuadratic(const Matrix& Q, const ConvexSet& set, const Vector& y,
                           const Tolerances& tol = defaultTolerances());

/// f(b) = g*(-b) for the terminal cost of `problem`.
ExtReal dualTerminal(const BolzaProblem& problem, const Vector& b, const Tolerances& tol = defaultTolerances());

/// K_t(p, w) = L_t*(w, p). The LQ class splits into two quadratic conjugates
/// plus phi.p; the mixed class is maximized directly over the stage set.
ExtReal dualLagrangianEval(const BolzaProblem& problem, int t, const Vector& p, const Vector& w,
                           const Tolerances& tol = defaultTolerances());

/// The dual problem as a Bolza problem with Lagrangian K_t(p + w, w) and
/// terminal cost f.
DualModel dualAsBolza(const BolzaModel& model);

/// The set of w with K_t(p + w, w) finite, for fixed stage t and costate p.
class GammaK {
public:
    GammaK(const BolzaProblem& problem, int t, Vector p, const Tolerances& tol = defaultTolerances());

    /// For the LQ class: (A'+I)w + A'p in the polar of X_inf cap ker Q and
    /// B'(p+w) in the polar of U_inf cap ker R. The mixed class evaluates K.
    [[nodiscard]] bool contains(const Vector& w) const;

private:
    const BolzaProblem* problem_;
    int t_;
    Vector p_;
    Tolerances tol_;
};

/// Whether GammaK(t, p) is nonempty, decided by a Farkas feasibility LP.
/// Throws UnsupportedClass for mixed stages.
bool pMembership(const BolzaProblem& problem, int t, const Vector& p, const Tolerances& tol = defaultTolerances());

/// y lies in the polar of {x in set_inf | Qx = 0}, i.e. the quadratic
/// conjugate is finite at y.
bool inConjugateDomain(const Matrix& Q, const ConvexSet& set, const Vector& y,
                       const Tolerances& tol = defaultTolerances());

}  // namespace bolza
